#include "noncanon/jsonl.hpp"

#include <iostream>
#include <vector>

#include "noncanon/error.hpp"

namespace noncanon {

JsonlReader::JsonlReader(const std::filesystem::path& path) : path_(path.string()) {
  if (path_ == "-") {
    in_ = &std::cin;
    return;
  }
  file_.open(path, std::ios::binary);
  if (!file_) throw DataError("cannot open " + path_);
  in_ = &file_;
}

std::optional<nlohmann::json> JsonlReader::next() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(path_ + ":" + std::to_string(line_) + ": " + e.what());
    }
    if (!j.is_object()) throw FormatError(path_ + ":" + std::to_string(line_) + ": expected a JSON object");
    return j;
  }
  return std::nullopt;
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path) {
  if (path.string() == "-") {
    out_ = &std::cout;
    return;
  }
  file_.open(path, std::ios::binary | std::ios::trunc);
  if (!file_) throw DataError("cannot write " + path.string());
  out_ = &file_;
}

void JsonlWriter::write(const nlohmann::json& record) {
  *out_ << record.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict) << '\n';
  if (!*out_) throw DataError("write failed");
}

void JsonlWriter::flush() { out_->flush(); }

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  JsonlReader reader(path);
  std::vector<nlohmann::json> out;
  while (auto j = reader.next()) out.push_back(std::move(*j));
  return out;
}

}  // namespace noncanon
