#include "statnn/activations.hpp"

#include <cmath>
#include <numbers>

#include "statnn/error.hpp"

namespace statnn {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
// Triangle scaling so the first Fourier coefficient equals sqrt(2).
const double kTriangleScale = kPi / (2.0 * kSqrt2);

double sign_pow(long long m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// Raw 2*pi-periodic triangle wave with amplitude pi/2:
// (x - pi*floor(x/pi + 1/2)) * (-1)^floor(x/pi + 1/2)
double triangle_raw(double x) {
    const double t = x / kPi + 0.5;
    const double m = std::floor(t);
    return (x - kPi * m) * sign_pow(static_cast<long long>(m));
}

// Slope of triangle_raw; left-derivative on floor boundaries (the kinks).
double triangle_raw_grad(double x) {
    const double t = x / kPi + 0.5;
    double m = std::floor(t);
    if (t == m) m -= 1.0;  // exact kink: fall back to the segment on the left
    return sign_pow(static_cast<long long>(m));
}

}  // namespace

double activate(ActivationKind kind, double x) {
    if (!std::isfinite(x)) throw Error(ErrorCategory::numeric, "activate: non-finite input");
    switch (kind) {
        case ActivationKind::sin:
            return kSqrt2 * std::sin(x);
        case ActivationKind::sincos:
            return std::sin(x) + std::cos(x);
        case ActivationKind::triangle:
            return kTriangleScale * triangle_raw(x);
        case ActivationKind::periodic_relu:
            return (kPi / 4.0) * (triangle_raw(x + kPi / 2.0) + triangle_raw(x));
        case ActivationKind::relu:
            return x > 0.0 ? x : 0.0;
    }
    throw Error(ErrorCategory::config, "activate: unknown activation kind");
}

double activate_grad(ActivationKind kind, double x) {
    if (!std::isfinite(x)) throw Error(ErrorCategory::numeric, "activate_grad: non-finite input");
    switch (kind) {
        case ActivationKind::sin:
            return kSqrt2 * std::cos(x);
        case ActivationKind::sincos:
            return std::cos(x) - std::sin(x);
        case ActivationKind::triangle:
            return kTriangleScale * triangle_raw_grad(x);
        case ActivationKind::periodic_relu:
            return (kPi / 4.0) * (triangle_raw_grad(x + kPi / 2.0) + triangle_raw_grad(x));
        case ActivationKind::relu:
            return x > 0.0 ? 1.0 : 0.0;
    }
    throw Error(ErrorCategory::config, "activate_grad: unknown activation kind");
}

bool activation_is_periodic(ActivationKind kind) { return kind != ActivationKind::relu; }

bool activation_uses_bias(ActivationKind kind) { return kind != ActivationKind::sincos; }

ActivationKind activation_from_name(std::string_view name) {
    if (name == "sin") return ActivationKind::sin;
    if (name == "sincos") return ActivationKind::sincos;
    if (name == "triangle") return ActivationKind::triangle;
    if (name == "prelu") return ActivationKind::periodic_relu;
    if (name == "relu") return ActivationKind::relu;
    throw Error(ErrorCategory::config,
                "unknown activation '" + std::string(name) +
                    "' (expected sin|sincos|triangle|prelu|relu)");
}

std::string activation_name(ActivationKind kind) {
    switch (kind) {
        case ActivationKind::sin: return "sin";
        case ActivationKind::sincos: return "sincos";
        case ActivationKind::triangle: return "triangle";
        case ActivationKind::periodic_relu: return "prelu";
        case ActivationKind::relu: return "relu";
    }
    return "unknown";
}

}  // namespace statnn
