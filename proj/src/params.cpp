#include "cogcap/params.hpp"

#include <cmath>
#include <sstream>

#include "cogcap/errors.hpp"

namespace cogcap {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid SystemParams: ") + what);
}

}  // namespace

void SystemParams::validate() const {
    require(std::isfinite(T) && std::isfinite(N) && std::isfinite(B), "non-finite frame timing");
    require(T > 0.0 && N > 0.0 && N < T, "need 0 < N < T");
    require(B > 0.0, "need B > 0");

    const double nb_real = N * B;
    const double nb_round = std::round(nb_real);
    if (!(nb_round >= 1.0) || std::abs(nb_real - nb_round) > 1e-9 * std::max(1.0, nb_real)) {
        std::ostringstream msg;
        msg << "NB = N*B = " << nb_real << " must be a positive integer";
        throw ConfigError(msg.str());
    }

    require(data_symbols() >= 1.0, "need (T-N)*B - 1 >= 1");
    require(std::isfinite(sigma_h2) && sigma_h2 > 0.0, "need sigma_h2 > 0");
    require(std::isfinite(sigma_n2) && sigma_n2 > 0.0, "need sigma_n2 > 0");
    require(std::isfinite(sigma_s2) && sigma_s2 >= 0.0, "need sigma_s2 >= 0");
    require(std::isfinite(theta) && theta > 0.0, "need theta > 0");
    require(a > 0.0 && a < 1.0, "need a in (0,1)");
    require(b > 0.0 && b < 1.0, "need b in (0,1)");
}

}  // namespace cogcap
