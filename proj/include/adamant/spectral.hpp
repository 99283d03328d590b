#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace adamant {

inline constexpr double kFrequencyCutoffHz = 45.0;

/// One trial: Q channels (rows) by T time points (columns).
class TrialEpoch {
 public:
  TrialEpoch(Eigen::MatrixXd samples, double sample_rate_hz);

  const Eigen::MatrixXd& samples() const noexcept { return samples_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  Eigen::Index channels() const noexcept { return samples_.rows(); }
  Eigen::Index length() const noexcept { return samples_.cols(); }

 private:
  Eigen::MatrixXd samples_;
  double sample_rate_hz_;
};

/// Frequency band [low_hz, high_hz). Bins above the 45 Hz cutoff never
/// contribute, so a band reaching past it is effectively clipped.
struct BandSpec {
  std::string name;
  double low_hz = 0.0;
  double high_hz = 0.0;

  // Validates 0 < low < high and low < cutoff; clips high to the cutoff.
  static BandSpec make(std::string name, double low_hz, double high_hz);
  // "name:low:high", or one of theta, alpha, beta, gamma.
  static BandSpec parse(const std::string& text);
};

std::vector<BandSpec> standard_bands();

struct SpectralMatrix {
  Eigen::MatrixXcd values;  // Q x Q Hermitian
  std::string label;
  std::size_t averaged_terms = 1;
};

struct CoherenceMatrix {
  Eigen::MatrixXd values;  // Q x Q symmetric, unit diagonal
};

// d_q(w_j) = T^{-1/2} sum_{t=1}^{T} X_q(t) exp(-2 pi i w_j t), w_j = j / T,
// j = 0..T-1. Row q holds channel q.
Eigen::MatrixXcd dft(const TrialEpoch& epoch);

// Element (m, n) of the j-th matrix is d_m(w_j) conj(d_n(w_j)).
std::vector<SpectralMatrix> cross_spectra(const TrialEpoch& epoch);

// Positive DFT bins j (0 < j/T <= 1/2) with low <= j*rate/T < high and
// j*rate/T <= 45 Hz.
std::vector<std::size_t> band_bins(std::size_t length, double sample_rate_hz,
                                   const BandSpec& band);

// Mean over the band's bins within each trial, then over trials. Sums run in
// trial-ascending, frequency-ascending order. Throws std::invalid_argument
// ("band unresolved at this T") when no bin falls in the band.
SpectralMatrix band_trial_average(
    const std::vector<std::vector<SpectralMatrix>>& spectra_per_trial,
    const BandSpec& band, double sample_rate_hz);

// r_mn = |S_mn|^2 / (S_mm S_nn) with the diagonal set to exactly 1.
CoherenceMatrix coherence(const SpectralMatrix& s);

// Row-major strict upper triangle, length Q (Q - 1) / 2.
Eigen::VectorXd vectorize_upper(const CoherenceMatrix& coh);

// "ch_i:ch_j" names (1-based) in vectorize_upper order.
std::vector<std::string> upper_pair_names(std::size_t channels);

using WarningSink = std::function<void(std::string_view)>;

/// Streams trials into per-band spectral averages without materializing the
/// per-frequency matrices.
class BandAverager {
 public:
  BandAverager(std::vector<BandSpec> bands, std::size_t channels,
               std::size_t length, double sample_rate_hz);

  void add_trial(const TrialEpoch& epoch);

  std::size_t trials() const noexcept { return trials_; }
  const std::vector<BandSpec>& bands() const noexcept { return bands_; }
  // Averaged spectral matrix for band b. Calls `warn` when the average
  // covers a single (trial, bin) term, where coherence is identically 1.
  SpectralMatrix average(std::size_t band, const WarningSink& warn = {}) const;

 private:
  std::vector<BandSpec> bands_;
  std::vector<std::vector<std::size_t>> bins_;
  std::vector<Eigen::MatrixXcd> sums_;
  std::size_t channels_;
  std::size_t length_;
  double sample_rate_hz_;
  std::size_t trials_ = 0;
};

// Coherence feature vectors (one per band) for one subject's trials.
std::vector<Eigen::VectorXd> subject_coherence_features(
    const std::vector<TrialEpoch>& trials, const std::vector<BandSpec>& bands,
    const WarningSink& warn = {});

}  // namespace adamant
