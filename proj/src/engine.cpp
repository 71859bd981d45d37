#include "fsex/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fft.hpp"
#include "fsex/errors.hpp"

namespace fsex {
namespace {

double grid_sum(const SampleGrid& g) {
  double s = 0.0;
  for (double v : g.values()) s += v;
  return s;
}

ComplexGrid weighted_product(const ComplexGrid& x, const SampleGrid& w) {
  ComplexGrid out(x.width(), x.height());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.at_index(i) = x.at_index(i) * w.at_index(i);
  }
  return out;
}

}  // namespace

Extrapolator::Extrapolator(const RegionMask& mask, const SampleGrid& rho,
                           const EngineConfig& cfg)
    : basis_(mask.width(), mask.height()),
      cfg_(cfg),
      mask_(mask),
      w_(make_weighting_grid(rho, mask)),
      weight_sum_(grid_sum(w_)),
      khat_(build_khat_spectral(w_)) {
  if (cfg_.max_iterations < 1) {
    throw ConfigError("max_iterations must be at least 1");
  }
  if (cfg_.projection_floor && !(*cfg_.projection_floor >= 0.0)) {
    throw ConfigError("projection floor must be non-negative");
  }

  const int M = basis_.width();
  const int N = basis_.height();
  const int size = basis_.size();

  basis_norms_.resize(size);
  for (int k = 0; k < size; ++k) {
    basis_norms_[k] = weighted_basis_norm(basis_, k, w_);
  }

  phase_rows_.resize(static_cast<std::size_t>(M) * M);
  for (int k1 = 0; k1 < M; ++k1) {
    for (int m = 0; m < M; ++m) {
      phase_rows_[static_cast<std::size_t>(k1) * M + m] =
          unit_phase((static_cast<long long>(k1) * m) % M, M);
    }
  }
  phase_cols_.resize(static_cast<std::size_t>(N) * N);
  for (int k2 = 0; k2 < N; ++k2) {
    for (int n = 0; n < N; ++n) {
      phase_cols_[static_cast<std::size_t>(k2) * N + n] =
          unit_phase((static_cast<long long>(k2) * n) % N, N);
    }
  }

  ComplexGrid wc(M, N);
  for (std::size_t i = 0; i < w_.size(); ++i) {
    wc.at_index(i) = {w_.at_index(i), 0.0};
  }
  ComplexGrid ws = fft::forward(wc);
  w_spectrum_ = std::move(ws.values());
}

ModelState Extrapolator::init(const SampleGrid& f) const {
  if (f.width() != width() || f.height() != height()) {
    throw DimensionMismatchError("sample grid does not match the engine area");
  }
  ModelState state;
  state.residual = ComplexGrid(width(), height());
  double max_abs = 0.0;
  for (int m = 0; m < width(); ++m) {
    for (int n = 0; n < height(); ++n) {
      if (!mask_.is_support(m, n)) continue;
      const double v = f(m, n);
      if (!std::isfinite(v)) {
        throw ConfigError("support samples must be finite");
      }
      state.residual(m, n) = {v, 0.0};
      max_abs = std::max(max_abs, std::abs(v));
    }
  }
  state.projection_floor =
      cfg_.projection_floor
          ? *cfg_.projection_floor
          : 1e-12 * max_abs * static_cast<double>(basis_.size());
  if (cfg_.fast_path) {
    state.residual_spectrum =
        fft::forward(weighted_product(state.residual, w_));
  }
  return state;
}

StepStatus Extrapolator::step(ModelState& state, StepTrace* trace) const {
  if (state.residual.width() != width() ||
      state.residual.height() != height()) {
    throw DimensionMismatchError("state does not match the engine area");
  }
  if (cfg_.residual_energy_stop &&
      residual_energy(state) <= *cfg_.residual_energy_stop) {
    return StepStatus::kConvergedEnergy;
  }

  const int M = width();
  const int N = height();
  const int size = basis_.size();
  std::vector<std::complex<double>> p(size);
  if (cfg_.fast_path) {
    for (int k = 0; k < size; ++k) {
      p[k] = state.residual_spectrum.at_index(k) / weight_sum_;
    }
  } else {
    const ComplexGrid rw = weighted_product(state.residual, w_);
    // Separable sums: the inner accumulation over n depends on k2 only.
    std::vector<std::complex<double>> inner(M);
    for (int k2 = 0; k2 < N; ++k2) {
      const std::complex<double>* col =
          &phase_cols_[static_cast<std::size_t>(k2) * N];
      for (int m = 0; m < M; ++m) {
        std::complex<double> acc{0.0, 0.0};
        const std::size_t base = static_cast<std::size_t>(m) * N;
        for (int n = 0; n < N; ++n) {
          acc += rw.at_index(base + n) * std::conj(col[n]);
        }
        inner[m] = acc;
      }
      for (int k1 = 0; k1 < M; ++k1) {
        const std::complex<double>* row =
            &phase_rows_[static_cast<std::size_t>(k1) * M];
        std::complex<double> num{0.0, 0.0};
        for (int m = 0; m < M; ++m) {
          num += inner[m] * std::conj(row[m]);
        }
        const int k = basis_.index_of(k1, k2);
        p[k] = num / basis_norms_[k];
      }
    }
  }

  const int u = select(p, state.projection_floor);
  if (u < 0) {
    if (trace) {
      trace->projections = std::move(p);
      trace->selected = -1;
      trace->coefficient = {};
      trace->odc_fallback = false;
    }
    return StepStatus::kConvergedBelowFloor;
  }

  std::complex<double> coefficient;
  bool fell_back = false;
  if (cfg_.odc_enabled) {
    const Compensation comp = compensate(p, u, khat_, state.projection_floor);
    coefficient = comp.coefficient;
    fell_back = comp.fell_back;
    if (fell_back) ++state.odc_fallbacks;
  } else {
    coefficient = p[u];
  }
  if (basis_.is_self_conjugate(u)) {
    coefficient = {coefficient.real(), 0.0};
  }

  if (trace) {
    trace->projections = std::move(p);
    trace->selected = u;
    trace->coefficient = coefficient;
    trace->odc_fallback = fell_back;
  }
  apply_update(state, u, coefficient);
  return StepStatus::kStepped;
}

int Extrapolator::select(std::span<const std::complex<double>> p,
                         double floor) const {
  int best = -1;
  double best_score = -1.0;
  const int size = basis_.size();
  for (int k = 0; k < size; ++k) {
    if (basis_.conjugate_index(k) < k) continue;
    const double mag = std::abs(p[k]);
    if (!(mag > 0.0) || mag < floor) continue;
    const double score = mag * mag * basis_norms_[k];
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

void Extrapolator::apply_update(ModelState& state, int u,
                                std::complex<double> coefficient) const {
  const int M = width();
  const int N = height();
  const auto [u1, u2] = basis_.frequency(u);
  const int uc = basis_.conjugate_index(u);
  const bool self = (uc == u);

  state.coefficients[u] += coefficient;
  if (!self) state.coefficients[uc] += std::conj(coefficient);

  // The joint pair subtraction c*phi_u + conj(c)*phi_conj(u) equals
  // 2*Re(c*phi_u) pointwise, so the residual stays exactly real; missing
  // positions are skipped and stay exactly 0.
  const double factor = self ? 1.0 : 2.0;
  const std::complex<double>* row =
      &phase_rows_[static_cast<std::size_t>(u1) * M];
  const std::complex<double>* col =
      &phase_cols_[static_cast<std::size_t>(u2) * N];
  for (int m = 0; m < M; ++m) {
    const std::complex<double> cm = coefficient * row[m];
    for (int n = 0; n < N; ++n) {
      if (!mask_.is_support(m, n)) continue;
      const std::complex<double> z = cm * col[n];
      auto& r = state.residual(m, n);
      r = {r.real() - factor * z.real(), r.imag()};
    }
  }

  if (cfg_.fast_path) {
    // Subtracting c*phi_v from the residual subtracts the w spectrum
    // shifted by v, scaled by c, from DFT(r*w).
    const auto subtract_shift = [&](std::complex<double> c, int v) {
      const auto [v1, v2] = basis_.frequency(v);
      for (int k1 = 0; k1 < M; ++k1) {
        int d1 = k1 - v1;
        if (d1 < 0) d1 += M;
        const std::size_t base_k = static_cast<std::size_t>(k1) * N;
        const std::size_t base_d = static_cast<std::size_t>(d1) * N;
        for (int k2 = 0; k2 < N; ++k2) {
          int d2 = k2 - v2;
          if (d2 < 0) d2 += N;
          state.residual_spectrum.at_index(base_k + k2) -=
              c * w_spectrum_[base_d + d2];
        }
      }
    };
    subtract_shift(coefficient, u);
    if (!self) subtract_shift(std::conj(coefficient), uc);
  }
  ++state.iteration;
}

SampleGrid Extrapolator::synthesize(const ModelState& state) const {
  const int M = width();
  const int N = height();
  ComplexGrid g(M, N);
  if (cfg_.fast_path) {
    ComplexGrid spectrum(M, N);
    for (const auto& [k, c] : state.coefficients) {
      spectrum.at_index(static_cast<std::size_t>(k)) = c;
    }
    g = fft::backward(spectrum);
  } else {
    for (const auto& [k, c] : state.coefficients) {
      const auto [k1, k2] = basis_.frequency(k);
      const std::complex<double>* row =
          &phase_rows_[static_cast<std::size_t>(k1) * M];
      const std::complex<double>* col =
          &phase_cols_[static_cast<std::size_t>(k2) * N];
      for (int m = 0; m < M; ++m) {
        const std::complex<double> cm = c * row[m];
        const std::size_t base = static_cast<std::size_t>(m) * N;
        for (int n = 0; n < N; ++n) {
          g.at_index(base + n) += cm * col[n];
        }
      }
    }
  }
  SampleGrid out(M, N);
  double max_imag = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    max_imag = std::max(max_imag, std::abs(g.at_index(i).imag()));
    out.at_index(i) = g.at_index(i).real();
  }
  if (max_imag > 1e-6) {
    throw InternalConsistencyError("synthesis imaginary residue " +
                                   std::to_string(max_imag));
  }
  return out;
}

double Extrapolator::residual_energy(const ModelState& state) const {
  return weighted_residual_energy(state.residual, w_);
}

SampleGrid extrapolate(const SampleGrid& f, const RegionMask& mask,
                       const WeightConfig& wcfg, const EngineConfig& cfg) {
  const SampleGrid rho = make_isotropic_rho(mask.width(), mask.height(), wcfg);
  const Extrapolator engine(mask, rho, cfg);
  ModelState state = engine.init(f);
  for (int i = 0; i < cfg.max_iterations; ++i) {
    if (engine.step(state) != StepStatus::kStepped) break;
  }
  return engine.synthesize(state);
}

std::vector<std::complex<double>> project_all(const ComplexGrid& residual,
                                              const SampleGrid& w,
                                              const BasisSet& basis) {
  if (residual.width() != basis.width() ||
      residual.height() != basis.height() || w.width() != basis.width() ||
      w.height() != basis.height()) {
    throw DimensionMismatchError("residual, weighting and basis dimensions "
                                 "must match");
  }
  const int size = basis.size();
  std::vector<std::complex<double>> p(size);
  for (int k = 0; k < size; ++k) {
    const ComplexGrid phi = basis.evaluate(k);
    p[k] = weighted_inner_product(residual, phi, w) /
           weighted_basis_norm(basis, k, w);
  }
  return p;
}

std::vector<std::complex<double>> project_all_fft(const ComplexGrid& residual,
                                                  const SampleGrid& w) {
  if (residual.width() != w.width() || residual.height() != w.height()) {
    throw DimensionMismatchError("residual and weighting dimensions must "
                                 "match");
  }
  const double sum = grid_sum(w);
  if (!(sum > 0.0)) {
    throw NoSupportError("weighting sums to zero");
  }
  const ComplexGrid spectrum = fft::forward(weighted_product(residual, w));
  std::vector<std::complex<double>> p(spectrum.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = spectrum.at_index(k) / sum;
  }
  return p;
}

int select_basis(std::span<const std::complex<double>> p, const SampleGrid& w,
                 const BasisSet& basis, double floor) {
  if (p.size() != static_cast<std::size_t>(basis.size())) {
    throw DimensionMismatchError("projection vector length does not match "
                                 "the basis");
  }
  if (w.width() != basis.width() || w.height() != basis.height()) {
    throw DimensionMismatchError("weighting and basis dimensions must match");
  }
  if (!(grid_sum(w) > 0.0)) {
    throw NoSupportError("weighting sums to zero");
  }
  int best = -1;
  double best_score = -1.0;
  for (int k = 0; k < basis.size(); ++k) {
    const double mag = std::abs(p[k]);
    if (!(mag > 0.0) || mag < floor) continue;
    const double score = mag * mag * weighted_basis_norm(basis, k, w);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  if (best < 0) {
    throw AllBelowFloorError("every projection is below the floor");
  }
  return best;
}

double weighted_residual_energy(const ComplexGrid& residual,
                                const SampleGrid& w) {
  if (residual.width() != w.width() || residual.height() != w.height()) {
    throw DimensionMismatchError("residual and weighting dimensions must "
                                 "match");
  }
  double energy = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    energy += w.at_index(i) * std::norm(residual.at_index(i));
  }
  return energy;
}

}  // namespace fsex
