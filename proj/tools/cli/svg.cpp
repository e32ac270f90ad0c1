#include "svg.hpp"

#include <cmath>

#include "amo/version.hpp"
#include "emit.hpp"

namespace amo::cli {

namespace {

constexpr double kW = 1200.0;
constexpr double kH = 900.0;
constexpr double kMargin = 40.0;

}  // namespace

std::string butterfly_svg(double coupling, long long q_max,
                          const std::vector<spectrum::ButterflyTile>& tiles) {
  const double e_max = 2.0 + 2.0 * std::abs(coupling);
  auto X = [](double x) { return kMargin + x * (kW - 2.0 * kMargin); };
  auto Y = [e_max](double e) {
    return kMargin + (e_max - e) / (2.0 * e_max) * (kH - 2.0 * kMargin);
  };

  std::string s;
  s.reserve(1 << 20);
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1200\" "
       "height=\"900\" viewBox=\"0 0 1200 900\">\n";
  s += "<!-- amo " + std::string(kVersion) + " lambda=" + num17(coupling) +
       " qmax=" + std::to_string(q_max) + " -->\n";
  s += "<rect x=\"0\" y=\"0\" width=\"1200\" height=\"900\" fill=\"#ffffff\"/>\n";
  // frame and the E = 0 line, for orientation
  s += "<rect x=\"" + num17(kMargin) + "\" y=\"" + num17(kMargin) +
       "\" width=\"" + num17(kW - 2 * kMargin) + "\" height=\"" +
       num17(kH - 2 * kMargin) +
       "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + num17(X(0.0)) + "\" y1=\"" + num17(Y(0.0)) +
       "\" x2=\"" + num17(X(1.0)) + "\" y2=\"" + num17(Y(0.0)) +
       "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";

  for (const auto& tile : tiles) {
    if (!tile.error.empty()) {
      s += "<!-- skipped " + std::to_string(tile.p) + "/" +
           std::to_string(tile.q) + ": " + tile.error + " -->\n";
      continue;
    }
    const std::string xs = num17(X(double(tile.p) / double(tile.q)));
    s += "<g stroke=\"#1a2a6c\" stroke-width=\"" +
         num17(8.0 / double(tile.q)) + "\">\n";
    for (const auto& band : tile.bands.bands) {
      s += "<line x1=\"" + xs + "\" y1=\"" + num17(Y(band.lo)) + "\" x2=\"" +
           xs + "\" y2=\"" + num17(Y(band.hi)) + "\"/>\n";
    }
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace amo::cli
