#include "qkdjam/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qkdjam/scenario.hpp"

namespace qkdjam {

Cell text_cell(std::string value) { return Cell{std::move(value), false}; }
Cell num_cell(std::string formatted) { return Cell{std::move(formatted), true}; }

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) {
    throw std::domain_error("format_fixed: non-finite value");
  }
  // integer-based to stay independent of locale and printf rounding mode
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) {
    scale *= 10.0;
  }
  const long long scaled =
      static_cast<long long>(std::floor(std::abs(value) * scale + 0.5));
  const long long whole = scaled / static_cast<long long>(scale);
  const long long frac = scaled % static_cast<long long>(scale);
  std::string out = value < 0.0 && scaled != 0 ? "-" : "";
  out += std::to_string(whole);
  if (decimals > 0) {
    std::string digits = std::to_string(frac);
    out += '.';
    out += std::string(static_cast<std::size_t>(decimals) - digits.size(), '0');
    out += digits;
  }
  return out;
}

std::string format_general(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

std::string format_integer(std::int64_t value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRId64, value);
  return buf;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string json_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_csv(const Report& report) {
  std::string out;
  for (const auto& [key, value] : report.metadata) {
    out += "# " + csv_escape(key) + "," + csv_escape(value) + "\n";
  }
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_escape(report.columns[i]);
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_escape(row[i].text);
    }
    out += '\n';
  }
  return out;
}

std::string render_jsonl(const Report& report) {
  std::string out;
  if (!report.metadata.empty()) {
    out += "{\"meta\":{";
    for (std::size_t i = 0; i < report.metadata.size(); ++i) {
      if (i > 0) out += ',';
      out += "\"" + json_escape(report.metadata[i].first) + "\":\"" +
             json_escape(report.metadata[i].second) + "\"";
    }
    out += "}}\n";
  }
  for (const auto& row : report.rows) {
    out += '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += "\"" + json_escape(report.columns[i]) + "\":";
      if (row[i].text.empty()) {
        out += "null";
      } else if (row[i].numeric) {
        out += row[i].text;
      } else {
        out += "\"" + json_escape(row[i].text) + "\"";
      }
    }
    out += "}\n";
  }
  return out;
}

std::string render_text(const Report& report) {
  std::vector<std::size_t> widths(report.columns.size());
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    widths[i] = report.columns[i].size();
  }
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].text.size());
    }
  }
  std::string out;
  auto emit_row = [&](auto get_field) {
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      if (i > 0) out += "  ";
      const std::string field = get_field(i);
      out += field;
      if (i + 1 < report.columns.size()) {
        out += std::string(widths[i] - field.size(), ' ');
      }
    }
    out += '\n';
  };
  emit_row([&](std::size_t i) { return report.columns[i]; });
  for (const auto& row : report.rows) {
    emit_row([&](std::size_t i) { return row[i].text; });
  }
  for (const auto& [key, value] : report.metadata) {
    out += key + ": " + value + "\n";
  }
  return out;
}

} // namespace

std::string render(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::JsonLines: return render_jsonl(report);
    case ReportFormat::TextTable: return render_text(report);
  }
  throw std::domain_error("render: unknown format");
}

void write_report(const Report& report, ReportFormat format,
                  const std::optional<std::filesystem::path>& out_path) {
  const std::string rendered = render(report, format);
  if (!out_path) {
    std::fwrite(rendered.data(), 1, rendered.size(), stdout);
    return;
  }
  std::ofstream out(*out_path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open output file " + out_path->string());
  }
  out.write(rendered.data(), static_cast<std::streamsize>(rendered.size()));
  if (!out) {
    throw IoError("failed writing " + out_path->string());
  }
}

} // namespace qkdjam
