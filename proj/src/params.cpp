#include "jcs/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jcs {

// Default drive: three tones with E_1 = 1/sqrt(2), E_2 = E_3 = sqrt(2).
// Tone 2 sits on the second ladder step, delta_tilde(2) = sqrt(2) - 1; tone 3
// is the scanned probe and starts at the first-step value 1.
SystemParams::SystemParams()
    : amps{1.0 / std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0)},
      deltas_tilde{std::sqrt(2.0) - 1.0, 1.0} {}

double SystemParams::delta_tilde(int m) const {
    if (m < 1 || m > n_tones())
        throw std::invalid_argument("tone index " + std::to_string(m) + " outside [1, " +
                                    std::to_string(n_tones()) + "]");
    return m == 1 ? 1.0 : deltas_tilde[static_cast<size_t>(m) - 2];
}

double SystemParams::tone_offset(int m) const { return (delta_tilde(m) - 1.0) * g_f; }

void SystemParams::validate() const {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (!(gamma_i >= 0.0)) throw std::invalid_argument("gamma_i must be non-negative");
    if (!(g_f > 0.0)) throw std::invalid_argument("g_f must be positive");
    if (amps.empty()) throw std::invalid_argument("at least one drive tone is required");
    for (size_t i = 0; i < amps.size(); ++i)
        if (!(amps[i] >= 0.0))
            throw std::invalid_argument("amps[" + std::to_string(i) + "] must be non-negative");
    if (deltas_tilde.size() + 1 != amps.size())
        throw std::invalid_argument("deltas_tilde must hold exactly n_tones - 1 entries");
    if (n_couplets < n_tones())
        throw std::invalid_argument("n_couplets must be at least the number of tones");
    if (n_couplets < 1) throw std::invalid_argument("n_couplets must be at least 1");
}

}  // namespace jcs
