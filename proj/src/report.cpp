#include "hplab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace hplab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  return std::to_string(std::get<long long>(c));
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

nlohmann::ordered_json number_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InputError("row width does not match the header");
  rows.push_back(std::move(row));
}

int Table::find(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : int(it - columns.begin());
}

double Table::number(std::size_t row, int col) const {
  const Cell& c = rows.at(row).at(std::size_t(col));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return double(*i);
  const auto& s = std::get<std::string>(c);
  double v = kNaN;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return kNaN;
  return v;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return {buf, res.ptr};
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += quote(t.columns[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += quote(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      rec.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        rec.push_back(std::move(field));
        records.push_back(std::move(rec));
      }
      field.clear();
      rec.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw InputError("unterminated quote in CSV");
  if (any || !field.empty()) {
    rec.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw InputError("CSV has no header");
  Table t;
  t.columns = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.columns.size()) {
      throw InputError("CSV row " + std::to_string(r) + " has the wrong number of fields");
    }
    t.rows.emplace_back(records[r].begin(), records[r].end());
  }
  return t;
}

nlohmann::ordered_json to_json(const Table& t) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (const auto* d = std::get_if<double>(&c)) {
        obj[t.columns[i]] = number_json(*d);
      } else if (const auto* n = std::get_if<long long>(&c)) {
        obj[t.columns[i]] = *n;
      } else {
        obj[t.columns[i]] = std::get<std::string>(c);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

nlohmann::ordered_json to_json(const NormEstimate& e) {
  nlohmann::ordered_json j;
  j["value"] = number_json(e.value);
  j["lower"] = number_json(e.lower);
  j["upper"] = number_json(e.upper);
  j["iters"] = e.iterations;
  j["gap"] = number_json(e.gap);
  j["method"] = e.method;
  return j;
}

nlohmann::ordered_json to_json(const InterpCertificate& c) {
  nlohmann::ordered_json j;
  j["delta"] = number_json(c.delta);
  j["carleson"] = number_json(c.carleson);
  auto norms = nlohmann::ordered_json::array();
  for (double v : c.dual_norms) norms.push_back(number_json(v));
  j["dual_norms"] = norms;
  j["verdict"] = to_string(c.verdict);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

nlohmann::ordered_json to_json(const FactorizationCertificate& c) {
  auto values = [](const FuncValues& v) {
    auto arr = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      arr.push_back({number_json(v(i).real()), number_json(v(i).imag())});
    }
    return arr;
  };
  nlohmann::ordered_json j;
  j["cost"] = number_json(c.cost);
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [f, g] : c.pairs) pairs.push_back({{"f", values(f)}, {"g", values(g)}});
  j["pairs"] = pairs;
  return j;
}

Table thmc1_table(const std::vector<Thmc1Row>& rows) {
  Table t;
  t.columns = {"kernel", "point", "p", "kxx", "lower", "upper", "ratio_a", "ratio_c", "ratio_d"};
  for (const auto& r : rows) {
    t.add_row({r.kernel, r.point, r.p, r.kxx, r.lower, r.upper, r.ratio_a, r.ratio_c, r.ratio_d});
  }
  return t;
}

Table example317_table(const std::vector<Example317Ratio>& rows) {
  Table t;
  t.columns = {"j", "log_y", "log_k", "sum", "ratio", "tail_bound", "terms"};
  for (const auto& r : rows) {
    t.add_row({(long long)r.j, r.log_y, r.log_k, r.sum, r.ratio, r.tail_bound, (long long)r.terms});
  }
  return t;
}

PlotKind parse_plot_kind(const std::string& s) {
  if (s == "ratio_vs_logk") return PlotKind::RatioVsLogK;
  if (s == "decay") return PlotKind::Decay;
  if (s == "spectrum") return PlotKind::Spectrum;
  throw InputError("unknown plot kind '" + s + "' (ratio_vs_logk, decay, spectrum)");
}

namespace {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> pts;
};

struct Axis {
  bool log = false;
  double lo = 0;
  double hi = 1;

  double map(double v) const { return log ? std::log10(v) : v; }
};

Axis fit_axis(const std::vector<double>& vs, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : vs) {
    lo = std::min(lo, a.map(v));
    hi = std::max(hi, a.map(v));
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = std::max(0.5, 0.1 * std::abs(hi));
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  return a;
}

std::string tick_label(const Axis& a, double mapped) {
  char buf[32];
  if (a.log) {
    std::snprintf(buf, sizeof buf, "1e%g", mapped);
  } else {
    std::snprintf(buf, sizeof buf, "%.4g", mapped);
  }
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string render(const std::vector<Series>& series, const std::string& xlabel,
                   const std::string& ylabel, bool logx, bool logy, const std::string& title) {
  std::vector<double> xs, ys;
  for (const auto& s : series) {
    for (auto [x, y] : s.pts) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  if (xs.empty()) throw InputError("nothing to plot");
  const Axis ax = fit_axis(xs, logx);
  const Axis ay = fit_axis(ys, logy);

  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (ax.map(x) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return T + ph - (ay.map(y) - ay.lo) / (ay.hi - ay.lo) * ph; };
  auto f = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << f(L) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(title) << "</text>\n";

  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << f(L) << "\" y1=\"" << f(T + ph) << "\" x2=\"" << f(L + pw) << "\" y2=\""
     << f(T + ph) << "\"/>\n"
     << "<line x1=\"" << f(L) << "\" y1=\"" << f(T) << "\" x2=\"" << f(L) << "\" y2=\"" << f(T + ph)
     << "\"/>\n</g>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double mx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
    const double sx = L + pw * k / 4.0;
    os << "<line x1=\"" << f(sx) << "\" y1=\"" << f(T + ph) << "\" x2=\"" << f(sx) << "\" y2=\""
       << f(T + ph + 5) << "\" stroke=\"black\"/>"
       << "<text x=\"" << f(sx) << "\" y=\"" << f(T + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(ax, mx) << "</text>\n";
    const double my = ay.lo + (ay.hi - ay.lo) * k / 4.0;
    const double sy = T + ph - ph * k / 4.0;
    os << "<line x1=\"" << f(L - 5) << "\" y1=\"" << f(sy) << "\" x2=\"" << f(L) << "\" y2=\""
       << f(sy) << "\" stroke=\"black\"/>"
       << "<text x=\"" << f(L - 8) << "\" y=\"" << f(sy + 4) << "\" text-anchor=\"end\">"
       << tick_label(ay, my) << "</text>\n";
  }
  os << "<text x=\"" << f(L + pw / 2) << "\" y=\"" << f(H - 10) << "\" text-anchor=\"middle\">"
     << escape(xlabel) << (logx ? " (log)" : "") << "</text>\n"
     << "<text x=\"16\" y=\"" << f(T + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << f(T + ph / 2) << ")\">" << escape(ylabel) << (logy ? " (log)" : "") << "</text>\n</g>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* c = colors[s % 6];
    const auto& pts = series[s].pts;
    if (pts.size() >= 2) {
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) os << ' ';
        os << f(px(pts[i].first)) << ',' << f(py(pts[i].second));
      }
      os << "\"/>\n";
    }
    for (auto [x, y] : pts) {
      os << "<circle cx=\"" << f(px(x)) << "\" cy=\"" << f(py(y)) << "\" r=\"3\" fill=\"" << c
         << "\"/>\n";
    }
    const double ly = T + 14 + 18 * double(s);
    os << "<line x1=\"" << f(L + pw + 12) << "\" y1=\"" << f(ly - 4) << "\" x2=\"" << f(L + pw + 30)
       << "\" y2=\"" << f(ly - 4) << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>"
       << "<text x=\"" << f(L + pw + 36) << "\" y=\"" << f(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(series[s].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<int> ratio_columns(const Table& t) {
  std::vector<int> cols;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i].rfind("ratio", 0) == 0) cols.push_back(int(i));
  }
  if (cols.empty()) throw InputError("table has no ratio column");
  return cols;
}

}  // namespace

std::string plot(const Table& t, PlotKind kind) {
  if (t.rows.empty()) throw InputError("cannot plot an empty table");
  std::vector<Series> series;
  switch (kind) {
    case PlotKind::RatioVsLogK: {
      const int lk = t.find("log_k");
      const int kx = t.find("kxx");
      if (lk < 0 && kx < 0) throw InputError("ratio_vs_logk needs a log_k or kxx column");
      for (int c : ratio_columns(t)) {
        Series s{t.columns[std::size_t(c)], {}};
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
          const double x = lk >= 0 ? t.number(r, lk) : std::log(t.number(r, kx));
          const double y = t.number(r, c);
          if (std::isfinite(x) && std::isfinite(y)) s.pts.emplace_back(x, y);
        }
        std::sort(s.pts.begin(), s.pts.end());
        series.push_back(std::move(s));
      }
      return render(series, "log k(x,x)", "ratio", false, false, "ratio vs log k");
    }
    case PlotKind::Decay: {
      int xc = t.find("j");
      if (xc < 0) xc = 0;
      for (int c : ratio_columns(t)) {
        Series s{t.columns[std::size_t(c)], {}};
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
          const double x = t.number(r, xc);
          const double y = t.number(r, c);
          if (std::isfinite(x) && std::isfinite(y) && y > 0) s.pts.emplace_back(x, y);
        }
        series.push_back(std::move(s));
      }
      return render(series, t.columns[std::size_t(xc)], "ratio", false, true, "decay");
    }
    case PlotKind::Spectrum: {
      int c = t.find("eigenvalue");
      if (c < 0) c = t.find("value");
      if (c < 0) throw InputError("spectrum needs an eigenvalue or value column");
      Series s{t.columns[std::size_t(c)], {}};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double y = t.number(r, c);
        if (std::isfinite(y) && y > 0) s.pts.emplace_back(double(r + 1), y);
      }
      series.push_back(std::move(s));
      return render(series, "index", t.columns[std::size_t(c)], false, true, "spectrum");
    }
  }
  throw InputError("unknown plot kind");
}

}  // namespace hplab
