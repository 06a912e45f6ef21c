#pragma once

#include <filesystem>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

namespace fsburgers::csv {

/// Shortest round-trip text for a double ("%.17g"). Locale independent.
std::string format_number(double v);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> columns);

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    (write_cell(cells, first), ...);
    out_ << '\n';
  }

 private:
  template <typename T>
  void write_cell(const T& cell, bool& first) {
    if (!first) out_ << ',';
    first = false;
    if constexpr (std::is_same_v<T, bool>) {
      out_ << (cell ? "true" : "false");
    } else if constexpr (std::is_floating_point_v<T>) {
      out_ << format_number(static_cast<double>(cell));
    } else {
      out_ << cell;
    }
  }

  std::ostream& out_;
};

/// Writes `path` through a sibling temporary file and a rename, so readers
/// never observe a partially written file.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& body);

}  // namespace fsburgers::csv
