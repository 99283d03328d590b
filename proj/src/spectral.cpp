#include "adamant/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace adamant {

TrialEpoch::TrialEpoch(Eigen::MatrixXd samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (samples_.cols() < 2) throw std::invalid_argument("epoch needs T >= 2 samples");
  if (samples_.rows() < 1) throw std::invalid_argument("epoch needs at least one channel");
  if (!samples_.allFinite()) throw std::invalid_argument("epoch contains non-finite samples");
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
    throw std::invalid_argument("sample rate must be positive");
  }
}

BandSpec BandSpec::make(std::string name, double low_hz, double high_hz) {
  if (!(low_hz > 0.0) || !(high_hz > low_hz)) {
    throw std::invalid_argument("band '" + name + "' needs 0 < low < high");
  }
  if (!(low_hz < kFrequencyCutoffHz)) {
    throw std::invalid_argument("band '" + name + "' starts above the 45 Hz cutoff");
  }
  return {std::move(name), low_hz, std::min(high_hz, kFrequencyCutoffHz)};
}

std::vector<BandSpec> standard_bands() {
  return {BandSpec::make("theta", 4.0, 8.0), BandSpec::make("alpha", 8.0, 12.0),
          BandSpec::make("beta", 12.0, 30.0), BandSpec::make("gamma", 30.0, 50.0)};
}

BandSpec BandSpec::parse(const std::string& text) {
  if (text.find(':') == std::string::npos) {
    for (auto& b : standard_bands()) {
      if (b.name == text) return b;
    }
    throw std::invalid_argument("unknown band '" + text + "'");
  }
  std::stringstream ss(text);
  std::string name, low, high, extra;
  if (!std::getline(ss, name, ':') || !std::getline(ss, low, ':') ||
      !std::getline(ss, high, ':') || std::getline(ss, extra)) {
    throw std::invalid_argument("band must look like name:low:high, got '" + text + "'");
  }
  try {
    std::size_t used_low = 0, used_high = 0;
    const double lo = std::stod(low, &used_low);
    const double hi = std::stod(high, &used_high);
    if (used_low != low.size() || used_high != high.size()) throw std::invalid_argument("");
    return make(name, lo, hi);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("band edges must be numbers in '" + text + "'");
  }
}

Eigen::MatrixXcd dft(const TrialEpoch& epoch) {
  const auto q = epoch.channels();
  const auto t = epoch.length();
  Eigen::FFT<double> fft;
  std::vector<double> in(static_cast<std::size_t>(t));
  std::vector<std::complex<double>> out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(t));
  // Time runs from 1, so each bin carries an extra exp(-2 pi i j / T).
  std::vector<std::complex<double>> shift(static_cast<std::size_t>(t));
  for (Eigen::Index j = 0; j < t; ++j) {
    shift[j] = std::polar(scale, -2.0 * std::numbers::pi * static_cast<double>(j) /
                                     static_cast<double>(t));
  }
  Eigen::MatrixXcd d(q, t);
  for (Eigen::Index c = 0; c < q; ++c) {
    for (Eigen::Index s = 0; s < t; ++s) in[s] = epoch.samples()(c, s);
    fft.fwd(out, in);
    for (Eigen::Index j = 0; j < t; ++j) d(c, j) = out[j] * shift[j];
  }
  return d;
}

std::vector<SpectralMatrix> cross_spectra(const TrialEpoch& epoch) {
  const Eigen::MatrixXcd d = dft(epoch);
  std::vector<SpectralMatrix> out;
  out.reserve(static_cast<std::size_t>(d.cols()));
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    std::ostringstream label;
    label << "w=" << j << "/" << d.cols();
    out.push_back({d.col(j) * d.col(j).adjoint(), label.str(), 1});
  }
  return out;
}

std::vector<std::size_t> band_bins(std::size_t length, double sample_rate_hz,
                                   const BandSpec& band) {
  std::vector<std::size_t> bins;
  for (std::size_t j = 1; 2 * j <= length; ++j) {
    const double hz = static_cast<double>(j) * sample_rate_hz / static_cast<double>(length);
    if (hz >= band.low_hz && hz < band.high_hz && hz <= kFrequencyCutoffHz) {
      bins.push_back(j);
    }
  }
  return bins;
}

SpectralMatrix band_trial_average(
    const std::vector<std::vector<SpectralMatrix>>& spectra_per_trial,
    const BandSpec& band, double sample_rate_hz) {
  if (spectra_per_trial.empty()) throw std::invalid_argument("no trials to average");
  const std::size_t length = spectra_per_trial.front().size();
  const auto bins = band_bins(length, sample_rate_hz, band);
  if (bins.empty()) throw std::invalid_argument("band unresolved at this T");
  const auto q = spectra_per_trial.front().front().values.rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(q, q);
  for (const auto& trial : spectra_per_trial) {
    if (trial.size() != length) {
      throw std::invalid_argument("trials have different lengths");
    }
    for (std::size_t j : bins) {
      if (trial[j].values.rows() != q) {
        throw std::invalid_argument("trials have different channel counts");
      }
      sum += trial[j].values;
    }
  }
  const std::size_t terms = bins.size() * spectra_per_trial.size();
  return {sum / static_cast<double>(terms), band.name, terms};
}

CoherenceMatrix coherence(const SpectralMatrix& s) {
  const auto q = s.values.rows();
  Eigen::VectorXd power(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    power(i) = s.values(i, i).real();
    if (!(power(i) > 0.0)) throw std::domain_error("zero-power channel");
  }
  CoherenceMatrix out{Eigen::MatrixXd::Identity(q, q)};
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = i + 1; j < q; ++j) {
      const double r = std::norm(s.values(i, j)) / (power(i) * power(j));
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

Eigen::VectorXd vectorize_upper(const CoherenceMatrix& coh) {
  const auto q = coh.values.rows();
  Eigen::VectorXd out(q * (q - 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = i + 1; j < q; ++j) out(k++) = coh.values(i, j);
  }
  return out;
}

std::vector<std::string> upper_pair_names(std::size_t channels) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < channels; ++i) {
    for (std::size_t j = i + 1; j < channels; ++j) {
      names.push_back("ch_" + std::to_string(i + 1) + ":ch_" + std::to_string(j + 1));
    }
  }
  return names;
}

BandAverager::BandAverager(std::vector<BandSpec> bands, std::size_t channels,
                           std::size_t length, double sample_rate_hz)
    : bands_(std::move(bands)),
      channels_(channels),
      length_(length),
      sample_rate_hz_(sample_rate_hz) {
  for (const auto& band : bands_) {
    auto bins = band_bins(length_, sample_rate_hz_, band);
    if (bins.empty()) {
      throw std::invalid_argument("band '" + band.name + "' unresolved at this T");
    }
    bins_.push_back(std::move(bins));
    const auto q = static_cast<Eigen::Index>(channels_);
    sums_.push_back(Eigen::MatrixXcd::Zero(q, q));
  }
}

void BandAverager::add_trial(const TrialEpoch& epoch) {
  if (static_cast<std::size_t>(epoch.channels()) != channels_ ||
      static_cast<std::size_t>(epoch.length()) != length_) {
    throw std::invalid_argument("inconsistent channel count or trial length");
  }
  if (epoch.sample_rate_hz() != sample_rate_hz_) {
    throw std::invalid_argument("inconsistent sample rate");
  }
  const Eigen::MatrixXcd d = dft(epoch);
  for (std::size_t b = 0; b < bands_.size(); ++b) {
    for (std::size_t j : bins_[b]) {
      const auto col = d.col(static_cast<Eigen::Index>(j));
      sums_[b].noalias() += col * col.adjoint();
    }
  }
  ++trials_;
}

SpectralMatrix BandAverager::average(std::size_t band, const WarningSink& warn) const {
  if (trials_ == 0) throw std::invalid_argument("no trials to average");
  const std::size_t terms = bins_.at(band).size() * trials_;
  if (terms == 1 && warn) {
    warn("band '" + bands_[band].name +
         "' averages a single frequency bin of a single trial; coherence is "
         "identically 1");
  }
  return {sums_[band] / static_cast<double>(terms), bands_[band].name, terms};
}

std::vector<Eigen::VectorXd> subject_coherence_features(
    const std::vector<TrialEpoch>& trials, const std::vector<BandSpec>& bands,
    const WarningSink& warn) {
  if (trials.empty()) throw std::invalid_argument("subject has no trials");
  const auto& first = trials.front();
  BandAverager averager(bands, static_cast<std::size_t>(first.channels()),
                        static_cast<std::size_t>(first.length()),
                        first.sample_rate_hz());
  for (const auto& t : trials) averager.add_trial(t);
  std::vector<Eigen::VectorXd> out;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    out.push_back(vectorize_upper(coherence(averager.average(b, warn))));
  }
  return out;
}

}  // namespace adamant
