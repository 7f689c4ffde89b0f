#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qkdjam {

enum class ReportFormat { Csv, JsonLines, TextTable };

/// One report cell: pre-formatted text plus whether it is numeric (JSONL
/// emits numerics unquoted). Empty text means not-applicable.
struct Cell {
  std::string text;
  bool numeric = false;
};

Cell text_cell(std::string value);
Cell num_cell(std::string formatted);

/// A report: fixed column order, pre-formatted rows, plus key/value
/// metadata (markers, summary figures) rendered ahead of the rows.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// Render with fully pinned text conventions: '.' decimal separator,
/// '\n' line endings, fixed column order. CSV renders metadata as leading
/// '# key,value' comment lines; JSONL as a leading meta object; text as a
/// trailing key: value block.
std::string render(const Report& report, ReportFormat format);

/// Write the rendered report to the path, or stdout when no path is given.
/// The file is written in one shot after rendering, so a failed run never
/// leaves a partial file. Throws IoError on write failure.
void write_report(const Report& report, ReportFormat format,
                  const std::optional<std::filesystem::path>& out_path);

/// Fixed-point formatting, half away from zero, locale-independent.
std::string format_fixed(double value, int decimals);

/// Compact general formatting (%.10g), locale-independent for finite input.
std::string format_general(double value);

std::string format_integer(std::int64_t value);

} // namespace qkdjam
