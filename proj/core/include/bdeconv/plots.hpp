#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "bdeconv/model_sim.hpp"
#include "bdeconv/pseudo_moment.hpp"

namespace bdeconv {

/// Complex-plane scatter: observations as grey dots, true points as red
/// crosses, estimated points as blue circles.
void emit_scatter(std::ostream& out, const ComplexSeries& y, const DiscreteComplexDist& truth,
                  std::span<const cplx> estimated);
void emit_scatter(const std::filesystem::path& path, const ComplexSeries& y, const DiscreteComplexDist& truth,
                  std::span<const cplx> estimated);

/// Line plot of G(sigma) with the zero axis.
void emit_g_curve_svg(std::ostream& out, std::span<const GCurvePoint> curve);

/// True when G changes sign somewhere along the curve.
bool has_sign_change(std::span<const GCurvePoint> curve);

}  // namespace bdeconv
