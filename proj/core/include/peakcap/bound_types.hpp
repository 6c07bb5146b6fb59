#pragma once

namespace peakcap {

// Power and peakiness constraints of the link. p_per_s is the admissible
// average received power normalized to the noise spectral density (1/s);
// beta >= 1 caps the allowed peak-to-average ratio in time.
struct LinkBudget {
  double p_per_s = 0.0;
  double beta = 1.0;
};

// One evaluated bound at one bandwidth. rate = awgn_term - penalty_term
// always; rate can be negative only when the optimizer was pinned at a
// boundary (flagged below).
struct BoundValue {
  double rate = 0.0;          // nats/s
  double awgn_term = 0.0;     // nats/s
  double penalty_term = 0.0;  // nats/s
  double alpha_star = 0.0;    // peakiness weight picked by the upper bound
  double gamma_star = 1.0;    // time-sharing factor picked by the lower bound
  int q_used = 0;             // number of active transmit eigendirections

  struct Diagnostics {
    int optimizer_iterations = 0;
    double quadrature_error = 0.0;
    double mc_half_width = 0.0;   // nats/s, 95% normal-theory half-width
    bool mc_converged = true;     // half-width target met within budget
    bool pinned = false;          // optimizer at a domain boundary
    bool circulant_fallback = false;  // exact eigen path failed or skipped
  } diag;
};

}  // namespace peakcap
