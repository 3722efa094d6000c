// Integral-means spectrum of interior whole-plane SLE for a few kappa, next to the
// blow-up rate obtained from the tridiagonal system on the M = 1 truncation curve.

#include <iomanip>
#include <iostream>

#include "lle/lle.hpp"

int main() {
    using namespace lle;

    std::cout << "kappa      q   beta(q)  branch\n";
    for (double kappa : {2.0, 4.0, 6.0}) {
        for (double q : {-2.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
            const auto p = beta_closed_form(Version::interior, q, kappa);
            std::cout << std::setw(5) << kappa << std::setw(7) << q << std::setw(10) << std::setprecision(6)
                      << p.beta << "  " << to_string(p.branch) << '\n';
        }
    }

    std::cout << "\nM = 1 curve: gamma, kappa, q, lambda (eigenvalue), beta (closed form)\n";
    for (double g : {0.9, 1.0, 1.1, 1.25}) {
        const auto t = truncation_curve(Version::interior, 1, g);
        const auto lam = frobenius_lambda(1, g, t.kappa).lambda_max;
        std::cout << g << "  " << t.kappa << "  " << t.q << "  " << lam << "  "
                  << beta_closed_form(Version::interior, t.q, t.kappa).beta << '\n';
    }
}
