#pragma once

#include <string>
#include <string_view>

namespace statnn {

/// Hidden-layer nonlinearities. The four periodic kinds share period 2*pi and
/// are scaled so their first Fourier component matches the sinusoid; relu is
/// the unbounded baseline.
enum class ActivationKind { sin, sincos, triangle, periodic_relu, relu };

double activate(ActivationKind kind, double x);

/// Exact derivative where it exists; left-derivative at triangle/periodic-relu
/// kinks and at relu's origin.
double activate_grad(ActivationKind kind, double x);

bool activation_is_periodic(ActivationKind kind);

/// sincos carries its own phase pair and draws no bias in MC estimation.
bool activation_uses_bias(ActivationKind kind);

ActivationKind activation_from_name(std::string_view name);
std::string activation_name(ActivationKind kind);

}  // namespace statnn
