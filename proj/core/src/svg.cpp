#include "hemoflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hemoflow/errors.hpp"

namespace hemoflow {

namespace {

struct Range {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
};

double nice_step(double span, int target_ticks) {
  if (!(span > 0.0))
    return 1.0;
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step;
  if (norm < 1.5)
    step = 1.0;
  else if (norm < 3.5)
    step = 2.0;
  else if (norm < 7.5)
    step = 5.0;
  else
    step = 10.0;
  return step * mag;
}

std::string fmt_tick(double v) {
  std::ostringstream os;
  if (v != 0.0 && (std::abs(v) >= 1e4 || std::abs(v) < 1e-3))
    os.precision(2), os << std::scientific << v;
  else {
    os.precision(6);
    os << v;
  }
  return os.str();
}

std::string esc(const std::string &s) {
  std::string o;
  for (char c : s) {
    switch (c) {
    case '&': o += "&amp;"; break;
    case '<': o += "&lt;"; break;
    case '>': o += "&gt;"; break;
    default: o += c;
    }
  }
  return o;
}

// Renders one plot into an SVG group at the given origin.
void render_plot(std::ostringstream &svg, const PlotSpec &spec, double ox,
                 double oy) {
  const double W = spec.width, H = spec.height;
  const double ml = 62, mr = 14, mt = 38 + 14.0 * spec.annotations.size(),
               mb = 46;
  const double pw = W - ml - mr, ph = H - mt - mb;

  auto txv = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto tyv = [&](double v) { return spec.log_y ? std::log10(v) : v; };

  Range rx, ry;
  bool first = true;
  for (const auto &s : spec.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0.0))
        continue;
      if (spec.log_y && !(s.y[i] > 0.0))
        continue;
      const double xv = txv(s.x[i]), yv = tyv(s.y[i]);
      if (first) {
        rx.lo = rx.hi = xv;
        ry.lo = ry.hi = yv;
        first = false;
      } else {
        rx.expand(xv);
        ry.expand(yv);
      }
    }
  for (const auto &[v, lbl] : spec.hlines)
    ry.expand(tyv(v));
  if (first) {
    rx = {0, 1};
    ry = {0, 1};
  }
  if (rx.hi - rx.lo < 1e-300) {
    rx.lo -= 0.5;
    rx.hi += 0.5;
  }
  if (ry.hi - ry.lo < 1e-300) {
    ry.lo -= 0.5;
    ry.hi += 0.5;
  }
  const double pad = 0.04 * (ry.hi - ry.lo);
  ry.lo -= pad;
  ry.hi += pad;

  auto X = [&](double v) { return ox + ml + (txv(v) - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto Y = [&](double v) { return oy + mt + ph - (tyv(v) - ry.lo) / (ry.hi - ry.lo) * ph; };

  svg << "<g>\n";
  svg << "<rect x='" << ox << "' y='" << oy << "' width='" << W
      << "' height='" << H << "' fill='white'/>\n";
  svg << "<rect x='" << ox + ml << "' y='" << oy + mt << "' width='" << pw
      << "' height='" << ph << "' fill='none' stroke='#333'/>\n";
  svg << "<text x='" << ox + W / 2 << "' y='" << oy + 20
      << "' text-anchor='middle' font-size='14' font-family='sans-serif'>"
      << esc(spec.title) << "</text>\n";
  for (std::size_t i = 0; i < spec.annotations.size(); ++i)
    svg << "<text x='" << ox + W / 2 << "' y='" << oy + 34 + 13.0 * i
        << "' text-anchor='middle' font-size='11' fill='#444' "
           "font-family='sans-serif'>"
        << esc(spec.annotations[i]) << "</text>\n";

  // ticks
  const double sx = nice_step(rx.hi - rx.lo, 6);
  for (double v = std::ceil(rx.lo / sx) * sx; v <= rx.hi + 1e-12 * sx; v += sx) {
    const double px = ox + ml + (v - rx.lo) / (rx.hi - rx.lo) * pw;
    svg << "<line x1='" << px << "' y1='" << oy + mt + ph << "' x2='" << px
        << "' y2='" << oy + mt + ph + 4 << "' stroke='#333'/>\n";
    svg << "<text x='" << px << "' y='" << oy + mt + ph + 16
        << "' text-anchor='middle' font-size='10' font-family='sans-serif'>"
        << fmt_tick(spec.log_x ? std::pow(10.0, v) : v) << "</text>\n";
  }
  const double sy = nice_step(ry.hi - ry.lo, 6);
  for (double v = std::ceil(ry.lo / sy) * sy; v <= ry.hi + 1e-12 * sy; v += sy) {
    const double py = oy + mt + ph - (v - ry.lo) / (ry.hi - ry.lo) * ph;
    svg << "<line x1='" << ox + ml - 4 << "' y1='" << py << "' x2='" << ox + ml
        << "' y2='" << py << "' stroke='#333'/>\n";
    svg << "<text x='" << ox + ml - 7 << "' y='" << py + 3
        << "' text-anchor='end' font-size='10' font-family='sans-serif'>"
        << fmt_tick(spec.log_y ? std::pow(10.0, v) : v) << "</text>\n";
  }
  svg << "<text x='" << ox + ml + pw / 2 << "' y='" << oy + H - 10
      << "' text-anchor='middle' font-size='12' font-family='sans-serif'>"
      << esc(spec.xlabel) << "</text>\n";
  svg << "<text x='" << ox + 14 << "' y='" << oy + mt + ph / 2
      << "' text-anchor='middle' font-size='12' font-family='sans-serif' "
         "transform='rotate(-90 "
      << ox + 14 << " " << oy + mt + ph / 2 << ")'>" << esc(spec.ylabel)
      << "</text>\n";

  for (const auto &[v, lbl] : spec.hlines) {
    const double py = Y(v);
    svg << "<line x1='" << ox + ml << "' y1='" << py << "' x2='" << ox + ml + pw
        << "' y2='" << py
        << "' stroke='#b03030' stroke-dasharray='5,4' stroke-width='1.2'/>\n";
    if (!lbl.empty())
      svg << "<text x='" << ox + ml + pw - 4 << "' y='" << py - 4
          << "' text-anchor='end' font-size='10' fill='#b03030' "
             "font-family='sans-serif'>"
          << esc(lbl) << "</text>\n";
  }

  for (const auto &s : spec.series) {
    svg << "<polyline fill='none' stroke='" << s.color << "' stroke-width='"
        << s.width << "' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (spec.log_x && !(s.x[i] > 0.0))
        continue;
      if (spec.log_y && !(s.y[i] > 0.0))
        continue;
      svg << X(s.x[i]) << ',' << Y(s.y[i]) << ' ';
    }
    svg << "'/>\n";
  }

  // legend
  double ly = oy + mt + 12;
  for (const auto &s : spec.series) {
    if (s.label.empty())
      continue;
    svg << "<line x1='" << ox + ml + 8 << "' y1='" << ly << "' x2='"
        << ox + ml + 30 << "' y2='" << ly << "' stroke='" << s.color
        << "' stroke-width='2'/>\n";
    svg << "<text x='" << ox + ml + 35 << "' y='" << ly + 3
        << "' font-size='11' font-family='sans-serif'>" << esc(s.label)
        << "</text>\n";
    ly += 15;
  }
  svg << "</g>\n";
}

void write_svg_file(const std::filesystem::path &path, double w, double h,
                    const std::string &body) {
  std::ofstream out(path);
  if (!out)
    throw SchemaError("cannot write SVG file: " + path.string());
  out << "<?xml version='1.0' encoding='UTF-8'?>\n"
      << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w
      << "' height='" << h << "' viewBox='0 0 " << w << ' ' << h << "'>\n"
      << body << "</svg>\n";
}

} // namespace

void write_line_plot(const std::filesystem::path &path, const PlotSpec &spec) {
  std::ostringstream svg;
  render_plot(svg, spec, 0, 0);
  write_svg_file(path, spec.width, spec.height, svg.str());
}

void write_panel_row(const std::filesystem::path &path,
                     const std::vector<PlotSpec> &panels) {
  if (panels.empty())
    throw DomainError("write_panel_row: no panels");
  std::ostringstream svg;
  double ox = 0, h = 0;
  for (const auto &p : panels) {
    render_plot(svg, p, ox, 0);
    ox += p.width;
    h = std::max(h, static_cast<double>(p.height));
  }
  write_svg_file(path, ox, h, svg.str());
}

void write_heatmap(const std::filesystem::path &path, const HeatmapSpec &spec) {
  const std::size_t nx = spec.x.size(), ny = spec.y.size();
  if (nx < 1 || ny < 1 || spec.values.size() != nx * ny)
    throw DomainError("write_heatmap: inconsistent sizes");
  double lo = spec.values[0], hi = spec.values[0];
  for (double v : spec.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo < 1e-300)
    hi = lo + 1.0;

  const double W = spec.width, H = spec.height;
  const double ml = 62, mr = 70, mt = 36, mb = 46;
  const double pw = W - ml - mr, ph = H - mt - mb;
  const double cw = pw / nx, ch = ph / ny;

  auto color = [&](double v) {
    // Two-ramp blue -> white -> red map.
    const double s = (v - lo) / (hi - lo);
    int r, g, b;
    if (s < 0.5) {
      const double q = s / 0.5;
      r = static_cast<int>(40 + q * (255 - 40));
      g = static_cast<int>(70 + q * (255 - 70));
      b = static_cast<int>(160 + q * (255 - 160));
    } else {
      const double q = (s - 0.5) / 0.5;
      r = 255;
      g = static_cast<int>(255 - q * (255 - 60));
      b = static_cast<int>(255 - q * (255 - 50));
    }
    std::ostringstream os;
    os << "rgb(" << r << ',' << g << ',' << b << ")";
    return os.str();
  };

  std::ostringstream svg;
  svg << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
  svg << "<text x='" << W / 2 << "' y='20' text-anchor='middle' "
         "font-size='14' font-family='sans-serif'>"
      << esc(spec.title) << "</text>\n";
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      const double v = spec.values[j * nx + i];
      svg << "<rect x='" << ml + i * cw << "' y='" << mt + (ny - 1 - j) * ch
          << "' width='" << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='"
          << color(v) << "'/>\n";
    }
  svg << "<rect x='" << ml << "' y='" << mt << "' width='" << pw
      << "' height='" << ph << "' fill='none' stroke='#333'/>\n";

  // axis extremes only; heat maps carry dense axes poorly at this size
  svg << "<text x='" << ml << "' y='" << H - 28
      << "' font-size='10' font-family='sans-serif'>" << fmt_tick(spec.x.front())
      << "</text>\n";
  svg << "<text x='" << ml + pw << "' y='" << H - 28
      << "' text-anchor='end' font-size='10' font-family='sans-serif'>"
      << fmt_tick(spec.x.back()) << "</text>\n";
  svg << "<text x='" << ml + pw / 2 << "' y='" << H - 10
      << "' text-anchor='middle' font-size='12' font-family='sans-serif'>"
      << esc(spec.xlabel) << "</text>\n";
  svg << "<text x='" << ml - 6 << "' y='" << mt + ph
      << "' text-anchor='end' font-size='10' font-family='sans-serif'>"
      << fmt_tick(spec.y.front()) << "</text>\n";
  svg << "<text x='" << ml - 6 << "' y='" << mt + 10
      << "' text-anchor='end' font-size='10' font-family='sans-serif'>"
      << fmt_tick(spec.y.back()) << "</text>\n";
  svg << "<text x='14' y='" << mt + ph / 2
      << "' text-anchor='middle' font-size='12' font-family='sans-serif' "
         "transform='rotate(-90 14 "
      << mt + ph / 2 << ")'>" << esc(spec.ylabel) << "</text>\n";

  // color bar
  const double bx = W - mr + 18, bw = 14;
  for (int k = 0; k < 64; ++k) {
    const double v = lo + (hi - lo) * (k + 0.5) / 64.0;
    svg << "<rect x='" << bx << "' y='" << mt + ph - (k + 1) * ph / 64.0
        << "' width='" << bw << "' height='" << ph / 64.0 + 0.5 << "' fill='"
        << color(v) << "'/>\n";
  }
  svg << "<rect x='" << bx << "' y='" << mt << "' width='" << bw
      << "' height='" << ph << "' fill='none' stroke='#333'/>\n";
  svg << "<text x='" << bx + bw + 4 << "' y='" << mt + ph
      << "' font-size='9' font-family='sans-serif'>" << fmt_tick(lo)
      << "</text>\n";
  svg << "<text x='" << bx + bw + 4 << "' y='" << mt + 8
      << "' font-size='9' font-family='sans-serif'>" << fmt_tick(hi)
      << "</text>\n";

  write_svg_file(path, W, H, svg.str());
}

} // namespace hemoflow
