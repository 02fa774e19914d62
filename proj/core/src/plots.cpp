#include "bdeconv/plots.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>

#include "bdeconv/error.hpp"

namespace bdeconv {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 30.0;

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kSize - 2 * kMargin); }
  double py(double y) const { return kSize - kMargin - (y - y0) / (y1 - y0) * (kSize - 2 * kMargin); }
};

Frame frame_for(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) { x0 -= 1.0; x1 += 1.0; }
  if (!(y1 > y0)) { y0 -= 1.0; y1 += 1.0; }
  const double pad_x = 0.05 * (x1 - x0);
  const double pad_y = 0.05 * (y1 - y0);
  return {x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y};
}

void open_svg(std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

void emit_scatter(std::ostream& out, const ComplexSeries& y, const DiscreteComplexDist& truth,
                  std::span<const cplx> estimated) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto extend = [&](const cplx& v) {
    x0 = std::min(x0, v.real());
    x1 = std::max(x1, v.real());
    y0 = std::min(y0, v.imag());
    y1 = std::max(y1, v.imag());
  };
  for (const cplx& v : y.samples) extend(v);
  for (const cplx& v : truth.points) extend(v);
  for (const cplx& v : estimated) extend(v);
  const Frame f = frame_for(x0, x1, y0, y1);

  open_svg(out);
  out << "<g fill=\"#888888\" fill-opacity=\"0.5\">\n";
  for (const cplx& v : y.samples) {
    out << "<circle cx=\"" << f.px(v.real()) << "\" cy=\"" << f.py(v.imag()) << "\" r=\"1.2\"/>\n";
  }
  out << "</g>\n<g stroke=\"red\" stroke-width=\"2\">\n";
  for (const cplx& v : truth.points) {
    const double cx = f.px(v.real()), cy = f.py(v.imag());
    out << "<line x1=\"" << cx - 6 << "\" y1=\"" << cy - 6 << "\" x2=\"" << cx + 6 << "\" y2=\"" << cy + 6 << "\"/>\n"
        << "<line x1=\"" << cx - 6 << "\" y1=\"" << cy + 6 << "\" x2=\"" << cx + 6 << "\" y2=\"" << cy - 6 << "\"/>\n";
  }
  out << "</g>\n<g fill=\"none\" stroke=\"blue\" stroke-width=\"2\">\n";
  for (const cplx& v : estimated) {
    out << "<circle cx=\"" << f.px(v.real()) << "\" cy=\"" << f.py(v.imag()) << "\" r=\"7\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

void emit_scatter(const std::filesystem::path& path, const ComplexSeries& y, const DiscreteComplexDist& truth,
                  std::span<const cplx> estimated) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  emit_scatter(out, y, truth, estimated);
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void emit_g_curve_svg(std::ostream& out, std::span<const GCurvePoint> curve) {
  if (curve.empty()) throw Error(ErrorCode::InvalidArgument, "empty G curve");
  double g0 = 0.0, g1 = 0.0;
  for (const GCurvePoint& pt : curve) {
    g0 = std::min(g0, pt.g);
    g1 = std::max(g1, pt.g);
  }
  const Frame f = frame_for(curve.front().sigma, curve.back().sigma, g0, g1);
  open_svg(out);
  out << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << f.py(0) << "\" x2=\"" << f.px(f.x1) << "\" y2=\"" << f.py(0)
      << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"blue\" stroke-width=\"1.5\" points=\"";
  for (const GCurvePoint& pt : curve) out << f.px(pt.sigma) << ',' << f.py(pt.g) << ' ';
  out << "\"/>\n</svg>\n";
}

bool has_sign_change(std::span<const GCurvePoint> curve) {
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if ((curve[i - 1].g > 0.0 && curve[i].g <= 0.0) || (curve[i - 1].g < 0.0 && curve[i].g >= 0.0)) return true;
  }
  return false;
}

}  // namespace bdeconv
