#include "newscomm/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "newscomm/error.hpp"

namespace newscomm {

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV record; `in` may supply further lines when a quoted
// field spans a newline.
std::vector<std::string> split_record(std::string line, std::istream& in) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == line.size()) {
      if (!quoted) break;
      std::string next;
      if (!std::getline(in, next)) throw DataError("unterminated quoted CSV field");
      fields.back() += '\n';
      line = std::move(next);
      i = static_cast<std::size_t>(-1);
      continue;
    }
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(std::string("results CSV: bad ") + what + " '" + s + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& s, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(std::string("results CSV: bad ") + what + " '" + s + "'");
  }
  return v;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

constexpr std::array<const char*, 7> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#17becf"};

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string results_csv(std::span<const ExperimentCell> cells) {
  std::string out = kResultsCsvHeader;
  out += '\n';
  for (const ExperimentCell& c : cells) {
    out += csv_field(c.pair_a) + ',' + csv_field(c.pair_b) + ',' + std::string(to_string(c.group)) + ',' +
           csv_field(c.train_slice) + ',' + csv_field(c.test_slice) + ',' + format_double(c.fraction) + ',' +
           std::to_string(c.n_train) + ',' + std::to_string(c.n_test) + ',' +
           (c.skipped ? std::string() : format_double(c.curve.auc)) + ',' + csv_field(c.params.dump()) + '\n';
  }
  return out;
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || (line != kResultsCsvHeader && line != std::string(kResultsCsvHeader) + "\r")) {
    throw DataError("results CSV: unexpected header in " + path.string());
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_record(line, in);
    if (f.size() != 10) throw DataError("results CSV: expected 10 fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.pair_a = f[0];
    r.pair_b = f[1];
    r.group = f[2];
    r.train_slice = f[3];
    r.test_slice = f[4];
    r.fraction = parse_double(f[5], "fraction");
    r.n_train = parse_size(f[6], "n_train");
    r.n_test = parse_size(f[7], "n_test");
    if (!f[8].empty()) r.auc = parse_double(f[8], "auc");
    r.params_json = f[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string roc_svg(std::span<const ExperimentCell> cells, const std::string& title) {
  constexpr double kLeft = 60, kTop = 40, kSize = 400;
  auto px = [&](double fpr) { return fixed(kLeft + fpr * kSize, 2); };
  auto py = [&](double tpr) { return fixed(kTop + (1.0 - tpr) * kSize, 2); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"680\" height=\"500\" viewBox=\"0 0 680 500\" "
       "font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"680\" height=\"500\" fill=\"white\"/>\n";
  s << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kSize << "\" height=\"" << kSize
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    s << "<text x=\"" << px(v) << "\" y=\"" << kTop + kSize + 16 << "\" text-anchor=\"middle\">" << fixed(v, 2)
      << "</text>\n";
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(v) << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
      << fixed(v, 2) << "</text>\n";
  }
  s << "<text x=\"" << kLeft + kSize / 2 << "\" y=\"" << kTop + kSize + 34
    << "\" text-anchor=\"middle\">False positive rate</text>\n";
  s << "<text x=\"16\" y=\"" << kTop + kSize / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << kTop + kSize / 2 << ")\">True positive rate</text>\n";
  s << "<line class=\"chance\" x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(1)
    << "\" stroke=\"black\" stroke-dasharray=\"4 4\"/>\n";

  std::size_t k = 0;
  for (const ExperimentCell& c : cells) {
    if (c.skipped) continue;
    const char* color = kPalette[static_cast<std::size_t>(c.group) % kPalette.size()];
    s << "<polyline class=\"roc\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < c.curve.points.size(); ++i) {
      if (i) s << ' ';
      s << px(c.curve.points[i].fpr) << ',' << py(c.curve.points[i].tpr);
    }
    s << "\"/>\n";
    const double ly = kTop + 10 + 18 * static_cast<double>(k);
    s << "<line x1=\"475\" y1=\"" << ly << "\" x2=\"495\" y2=\"" << ly << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"500\" y=\"" << ly << "\" dominant-baseline=\"middle\">" << xml_escape(to_string(c.group))
      << " (AUC=" << fixed(c.curve.auc, 2) << ")</text>\n";
    ++k;
  }
  s << "</svg>\n";
  return s.str();
}

ReportFiles emit_report(std::span<const ExperimentCell> cells, const std::filesystem::path& out_dir) {
  if (cells.empty()) throw UsageError("no results to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    out << text;
    if (!out.flush()) throw DataError("cannot write " + p.string());
  };

  ReportFiles files;
  files.csv = out_dir / "results.csv";
  write(files.csv, results_csv(cells));

  using PanelKey = std::tuple<std::string, std::string, std::string, std::string, double, std::string>;
  std::vector<PanelKey> order;
  std::map<PanelKey, std::vector<ExperimentCell>> panels;
  for (const ExperimentCell& c : cells) {
    const auto protocol = c.params.find("protocol");
    PanelKey key{c.pair_a, c.pair_b, c.train_slice, c.test_slice, c.fraction,
                 protocol != c.params.end() && protocol->is_string() ? protocol->get<std::string>() : ""};
    auto [it, inserted] = panels.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(c);
  }
  for (const PanelKey& key : order) {
    const auto& [a, b, train, test, fraction, protocol] = key;
    std::string stem = "roc_" + sanitize(a) + "_vs_" + sanitize(b);
    std::string title = a + " vs " + b;
    if (!train.empty() || !test.empty()) {
      stem += "_" + sanitize(train) + "_to_" + sanitize(test);
      title += ", train " + train + ", test " + test;
    }
    if (fraction != 1.0) {
      stem += "_top" + sanitize(format_double(fraction));
      title += ", top " + format_double(fraction * 100.0) + "%";
    }
    if (!protocol.empty()) {
      stem += "_" + sanitize(protocol);
      title += " (" + protocol + ")";
    }
    const auto& panel = panels.at(key);
    const auto path = out_dir / (stem + ".svg");
    write(path, roc_svg(panel, title));
    files.svgs.push_back(path);
  }
  return files;
}

}  // namespace newscomm
