#include "cogcap/sensing.hpp"

#include <cmath>
#include <stdexcept>

#include "cogcap/numerics.hpp"

namespace cogcap::sensing {

namespace {

double tail_prob(double lambda, double nb, double variance) {
    if (std::isnan(lambda) || lambda < 0.0)
        throw std::domain_error("sensing: threshold must be nonnegative");
    return 1.0 - numerics::reg_lower_gamma(nb, nb * lambda / variance);
}

}  // namespace

double false_alarm_prob(double lambda, const SystemParams& params) {
    return tail_prob(lambda, params.nb(), params.sigma_n2);
}

double detection_prob(double lambda, const SystemParams& params) {
    return tail_prob(lambda, params.nb(), params.sigma_n2 + params.sigma_s2);
}

SensingOperatingPoint operating_point_from_pd(double target_pd, const SystemParams& params) {
    if (!(target_pd > 0.0 && target_pd < 1.0))
        throw std::domain_error("operating_point_from_pd: target_pd must lie in (0,1)");
    const double nb = params.nb();
    const double lambda =
        (params.sigma_n2 + params.sigma_s2) / nb * numerics::inv_reg_lower_gamma(nb, 1.0 - target_pd);
    return {lambda, false_alarm_prob(lambda, params), detection_prob(lambda, params)};
}

std::vector<SensingOperatingPoint> roc_curve(std::span<const double> pd_grid,
                                             const SystemParams& params) {
    double prev = 0.0;
    for (double pd : pd_grid) {
        if (!(pd > 0.0 && pd < 1.0))
            throw std::domain_error("roc_curve: grid values must lie in (0,1)");
        if (pd <= prev) throw std::domain_error("roc_curve: grid must be strictly increasing");
        prev = pd;
    }
    std::vector<SensingOperatingPoint> out;
    out.reserve(pd_grid.size());
    for (double pd : pd_grid) out.push_back(operating_point_from_pd(pd, params));
    return out;
}

}  // namespace cogcap::sensing
