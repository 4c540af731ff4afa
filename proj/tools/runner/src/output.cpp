// Copyright 2026 The samsde Authors
// SPDX-License-Identifier: Apache-2.0

#include "samsde/runner/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace samsde::runner {

void ResultSeries::push(std::int64_t k, double m, double s, std::int64_t n) {
  iteration.push_back(k);
  mean.push_back(m);
  se.push_back(s);
  count.push_back(n);
}

ResultSeries from_stats(std::string name, const SeriesStats& s, std::int64_t stride) {
  ResultSeries r;
  r.name = std::move(name);
  const auto n = static_cast<std::int64_t>(s.mean.size());
  stride = std::max<std::int64_t>(stride, 1);
  for (std::int64_t k = 0; k < n; ++k) {
    if (k % stride == 0 || k == n - 1) r.push(k, s.mean[k], s.se[k], s.count[k]);
  }
  return r;
}

void Output::metric(std::string name, double value, double se) {
  summary.push_back({std::move(name), value, se});
}

void Output::metric(std::string name, double value) {
  metric(std::move(name), value, std::numeric_limits<double>::quiet_NaN());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

namespace {

constexpr const char* kEol = "\r\n";

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double map(double v) const { return log ? std::log10(v) : v; }
  double frac(double v) const { return (map(v) - lo) / (hi - lo); }

  void fit(const std::vector<const std::vector<double>*>& data) {
    double a = std::numeric_limits<double>::infinity();
    double b = -a;
    for (const auto* d : data) {
      for (double v : *d) {
        if (!usable(v)) continue;
        a = std::min(a, map(v));
        b = std::max(b, map(v));
      }
    }
    if (!std::isfinite(a)) {
      a = 0.0;
      b = 1.0;
    }
    if (b - a < 1e-300 * std::max(1.0, std::abs(a)) || b == a) {
      const double pad = a == 0.0 ? 1.0 : 0.05 * std::abs(a);
      a -= pad;
      b += pad;
    }
    lo = a;
    hi = b;
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const double first = std::ceil(lo);
      const double step = std::max(1.0, std::ceil((hi - lo) / 8.0));
      for (double e = first; e <= hi + 1e-12; e += step) t.push_back(std::pow(10.0, e));
      if (t.empty()) t.push_back(std::pow(10.0, lo));
      return t;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
      t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return t;
  }
};

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string results_csv(const Output& out) {
  std::string s = std::string("series,iteration,mean,se,count") + kEol;
  for (const auto& r : out.series) {
    const std::string name = csv_field(r.name);
    for (std::size_t i = 0; i < r.iteration.size(); ++i) {
      s += name + ',' + std::to_string(r.iteration[i]) + ',' + format_number(r.mean[i]) + ',' +
           format_number(r.se[i]) + ',' + std::to_string(r.count[i]) + kEol;
    }
  }
  return s;
}

std::string summary_csv(const Output& out) {
  std::string s = std::string("metric,value,se") + kEol;
  for (const auto& r : out.summary) {
    s += csv_field(r.metric) + ',' + format_number(r.value) + ',' + format_number(r.se) + kEol;
  }
  return s;
}

std::string table_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) s += ',';
    s += csv_field(t.header[i]);
  }
  s += kEol;
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_number(row[i]);
    }
    s += kEol;
  }
  return s;
}

std::string render_svg(const Plot& p) {
  const double width = 760.0;
  const double height = 460.0;
  const double left = 80.0;
  const double right = 200.0;
  const double top = 40.0;
  const double bottom = 60.0;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  Axis ax{p.logx};
  Axis ay{p.logy};
  std::vector<const std::vector<double>*> xs;
  std::vector<const std::vector<double>*> ys;
  for (const auto& s : p.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  ax.fit(xs);
  ay.fit(ys);
  auto px = [&](double v) { return left + pw * ax.frac(v); };
  auto py = [&](double v) { return top + ph * (1.0 - ay.frac(v)); };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
    << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
    << "\" fill=\"white\"/>\n"
    << "<text x=\"" << left + pw / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
    << "text-anchor=\"middle\">" << xml_escape(p.title) << "</text>\n"
    << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    o << "<line x1=\"" << fixed2(x) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed2(x)
      << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>"
      << "<text x=\"" << fixed2(x) << "\" y=\"" << top + ph + 18
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed2(y) << "\" x2=\"" << left
      << "\" y2=\"" << fixed2(y) << "\" stroke=\"black\"/>"
      << "<line x1=\"" << left << "\" y1=\"" << fixed2(y) << "\" x2=\"" << left + pw
      << "\" y2=\"" << fixed2(y) << "\" stroke=\"#e0e0e0\"/>"
      << "<text x=\"" << left - 8 << "\" y=\"" << fixed2(y + 4)
      << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 18
    << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(p.xlabel) << "</text>\n"
    << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
    << "transform=\"rotate(-90 18 " << top + ph / 2 << ")\">" << xml_escape(p.ylabel)
    << "</text>\n</g>\n";

  for (std::size_t i = 0; i < p.series.size(); ++i) {
    const auto& s = p.series[i];
    const char* colour = kPalette[i % std::size(kPalette)];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty()) {
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\""
          << pts << "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!ax.usable(s.x[k]) || !ay.usable(s.y[k])) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += fixed2(px(s.x[k])) + ',' + fixed2(py(s.y[k]));
    }
    flush();
    const double ly = top + 14.0 + 18.0 * static_cast<double>(i);
    o << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 36
      << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>"
      << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_outputs(const std::filesystem::path& dir, const Output& out, const Json& resolved) {
  std::filesystem::create_directories(dir);
  write_file(dir / "results.csv", results_csv(out));
  write_file(dir / "summary.csv", summary_csv(out));
  for (const auto& p : out.plots) write_file(dir / ("plot-" + p.file + ".svg"), render_svg(p));
  for (const auto& t : out.tables) write_file(dir / (t.file + ".csv"), table_csv(t));
  write_file(dir / "config.resolved", resolved.dump(2) + "\n");
}

}  // namespace samsde::runner
