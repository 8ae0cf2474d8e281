#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

namespace noncanon {

// Reads one JSON object per line. "-" means standard input. Blank lines are
// skipped.
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path);

  // Next object, or nullopt at end of input. Throws FormatError with the line
  // number for invalid JSON or a non-object line.
  std::optional<nlohmann::json> next();
  std::size_t line_number() const { return line_; }

 private:
  std::ifstream file_;
  std::istream* in_ = nullptr;
  std::string path_;
  std::size_t line_ = 0;
};

// Writes one compact JSON object per line, LF terminated. "-" means standard
// output.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);

  void write(const nlohmann::json& record);
  void flush();

 private:
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

// Reads a whole JSONL file into a vector.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

}  // namespace noncanon
