#pragma once

namespace urt::fbl {

// Shannon capacity (bits per channel use) and channel dispersion of the
// complex AWGN channel at SNR gamma (linear).
double capacity(double gamma);
double dispersion(double gamma);

// Normal-approximation maximal rate for blocklength n and error eps;
// correction adds the log2(n)/(2n) residual term.  A negative result is
// clipped to zero and flagged.
struct MaxRate {
  double rate;
  bool clipped;
};
MaxRate max_rate(int n, double eps, double gamma, bool correction = false);

// Block error probability at rate k/n (k information bits over n uses).
double error_prob(int n, double k, double gamma);

// Smallest SNR delivering error <= eps at rate k/n, by fixed-point iteration
// on the dispersion starting from its high-SNR limit; requires eps < 1/2.
struct RequiredSnr {
  double gamma;
  int iterations;
};
RequiredSnr required_snr(double k, int n, double eps);

// FBL SNR penalty: delta = required SNR over the asymptotic SNR at rate r,
// and its high-SNR limit delta0 = exp(Qinv(eps)/sqrt(n)).
struct SnrPenalty {
  double delta;
  double delta0;
};
SnrPenalty snr_penalty(double r, int n, double eps);

struct FadingSpec {
  enum class Family { rayleigh, rician };
  Family family = Family::rayleigh;
  double mean_snr = 1.0;    // linear
  double los_factor = 0.0;  // Rician K (linear); ignored for Rayleigh
};

enum class FadingMethod { expectation, asymptotic_outage };

// Error probability at rate k/n averaged over the fading SNR distribution,
// or its asymptotic outage approximation F_gamma(2^{k/n} - 1).
double avg_error_fading(const FadingSpec& fading, double k, int n, FadingMethod method);

// Success probability of a packet whose metadata, data, and feedback links
// fail independently with probabilities p_em, p_ed, p_ef, after n
// retransmission rounds (n = 0: single shot).  Slots are independent; round
// j succeeds only if the metadata decoded, the data failed, and the feedback
// got through in every earlier round.
double success_with_metadata(double p_em, double p_ed, double p_ef, int n);

}  // namespace urt::fbl
