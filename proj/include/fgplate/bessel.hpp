#pragma once

#include <utility>

namespace fgplate {

enum class BesselKind { J, Y, I, K };

/// One Bessel function value with its first derivative. When `scaled` is
/// set, both members carry the same removed exponential factor:
/// true value = value * exp(log_scale). The modified functions are scaled
/// (e^-x for I, e^x for K) once the argument exceeds the overflow guard.
struct BesselEval {
    double value = 0.0;
    double derivative = 0.0;
    bool scaled = false;
    double log_scale = 0.0;
};

/// J_p and Y_p with derivatives, integer order p >= 0, x > 0.
struct BesselJY {
    double j = 0.0, jp = 0.0, y = 0.0, yp = 0.0;
};

/// I_p and K_p with derivatives. Scaled members carry e^-x (i, ip) and
/// e^+x (k, kp) when `scaled` is set.
struct BesselIK {
    double i = 0.0, ip = 0.0, k = 0.0, kp = 0.0;
    bool scaled = false;
};

/// Arguments above this threshold return I/K in scaled form.
inline constexpr double bessel_scale_threshold = 50.0;

BesselJY bessel_jy(int order, double x);
BesselIK bessel_ik(int order, double x);

/// Single-kind wrapper. J and I additionally accept x = 0.
BesselEval bessel(BesselKind kind, int order, double x);

/// Self-test hook: residuals of the two Wronskian identities,
/// |J Y' - J' Y - 2/(pi x)| and |I K' - I' K + 1/x|.
std::pair<double, double> wronskian_check(int order, double x);

} // namespace fgplate
