#ifndef FSEX_ENGINE_HPP
#define FSEX_ENGINE_HPP

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fsex/basis.hpp"
#include "fsex/grid.hpp"
#include "fsex/odc.hpp"

namespace fsex {

struct EngineConfig {
  int max_iterations = 250;   // >= 1; the pipeline layer handles 0 itself
  bool odc_enabled = true;
  bool fast_path = true;
  // Projections with |p_k| below this are ignored by selection and
  // compensation. Unset: 1e-12 * max|f| * |L|, resolved at init.
  std::optional<double> projection_floor;
  // Optional early stop once the weighted residual energy sum(w*|r|^2)
  // drops to or below this value.
  std::optional<double> residual_energy_stop;
};

// State carried across iteration steps. One iteration processes one
// conjugate pair (or one self-conjugate function) jointly, so the
// coefficient map is conjugate-symmetric at all times: the entry at
// conj(k) is exactly conj of the entry at k, and entries at
// self-conjugate indices are real.
struct ModelState {
  // Sparse expansion coefficients keyed by basis index; std::map so every
  // traversal (synthesis, comparison) runs in one fixed order.
  std::map<int, std::complex<double>> coefficients;
  ComplexGrid residual;           // spatial r, exactly 0 on B
  ComplexGrid residual_spectrum;  // DFT(r*w); maintained on the fast path
  int iteration = 0;
  int odc_fallbacks = 0;
  double projection_floor = 0.0;  // resolved value
};

enum class StepStatus {
  kStepped,
  kConvergedBelowFloor,  // no projection at or above the floor; state unchanged
  kConvergedEnergy,      // weighted residual energy at or below the stop value
};

// Per-step introspection for oracle comparison and reporting.
struct StepTrace {
  std::vector<std::complex<double>> projections;  // p for all k
  int selected = -1;                              // u
  std::complex<double> coefficient{};             // c^_u as applied
  bool odc_fallback = false;
};

// Iterative sparse-model builder over one area L. Immutable after
// construction; independent runs may share one instance across threads.
class Extrapolator {
 public:
  // rho holds the weighting magnitudes over L (w = rho on A, 0 on B).
  // Throws NoSupportError when the mask has no support positions or the
  // resulting w sums to zero; ConfigError for max_iterations < 1.
  Extrapolator(const RegionMask& mask, const SampleGrid& rho,
               const EngineConfig& cfg);

  int width() const { return basis_.width(); }
  int height() const { return basis_.height(); }
  const EngineConfig& config() const { return cfg_; }
  const SampleGrid& weighting() const { return w_; }
  const BasisSet& basis() const { return basis_; }
  const OdcOperator& khat() const { return khat_; }

  // r = f * b, iteration 0, empty model. f values on B are ignored.
  ModelState init(const SampleGrid& f) const;

  // One iteration: project the residual onto every basis function, select
  // the strongest pair, estimate its coefficient (compensated when enabled),
  // update model and residual. Selection scans conjugate-pair
  // representatives (the smaller index of each pair) so the choice between
  // the two mathematically tied pair members is fixed; ties between pairs
  // break toward the smallest index.
  StepStatus step(ModelState& state, StepTrace* trace = nullptr) const;

  // g = sum of coefficient * basis function, evaluated over L. The result
  // is real for a conjugate-symmetric model; an imaginary residue above
  // 1e-6 (absolute) throws InternalConsistencyError.
  SampleGrid synthesize(const ModelState& state) const;

  double residual_energy(const ModelState& state) const;  // sum(w * |r|^2)

 private:
  int select(std::span<const std::complex<double>> p, double floor) const;
  void apply_update(ModelState& state, int u,
                    std::complex<double> coefficient) const;

  BasisSet basis_;
  EngineConfig cfg_;
  RegionMask mask_;
  SampleGrid w_;
  double weight_sum_;
  std::vector<double> basis_norms_;  // sum(w*|phi_k|^2) per k, reused by
                                     // selection and the direct projections
  OdcOperator khat_;
  std::vector<std::complex<double>> w_spectrum_;  // DFT of w, fast path
  // Phasor tables: phi_k[m,n] = phase_rows_[k1*M+m] * phase_cols_[k2*N+n],
  // the exact products BasisSet::value forms.
  std::vector<std::complex<double>> phase_rows_;
  std::vector<std::complex<double>> phase_cols_;
};

// Whole run in one call: init, iterate to convergence or
// cfg.max_iterations, synthesize. The weighting is the isotropic model
// from wcfg masked by the region flags.
SampleGrid extrapolate(const SampleGrid& f, const RegionMask& mask,
                       const WeightConfig& wcfg, const EngineConfig& cfg);

// Projection of the residual onto every basis function:
//   p_k = sum(r * conj(phi_k) * w) / sum(w * |phi_k|^2)
// by direct summation with the generic denominator.
std::vector<std::complex<double>> project_all(const ComplexGrid& residual,
                                              const SampleGrid& w,
                                              const BasisSet& basis);

// Same vector computed via one FFT of (r * w) divided by sum(w).
std::vector<std::complex<double>> project_all_fft(const ComplexGrid& residual,
                                                  const SampleGrid& w);

// Basis selection over all k:
//   u = argmax_k |p_k|^2 * sum(w * |phi_k|^2)
// with indices below the floor excluded and ties broken by the smallest k.
// Throws AllBelowFloorError when nothing is eligible (the iteration has
// converged) and NoSupportError when sum(w) = 0.
int select_basis(std::span<const std::complex<double>> p, const SampleGrid& w,
                 const BasisSet& basis, double floor);

// Weighted energy sum(w * |r|^2) of a residual grid.
double weighted_residual_energy(const ComplexGrid& residual,
                                const SampleGrid& w);

}  // namespace fsex

#endif
