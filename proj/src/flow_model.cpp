#include "nlof/flow_model.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "nlof/error.hpp"
#include "text_format.hpp"

namespace nlof {
namespace {

using detail::trim;

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

// Shared validation of the numeric part of a record.
FlowRecord make_record(std::string flow_id, std::string src, std::string dst,
                       std::uint64_t bytes, double duration,
                       std::optional<double> throughput, std::size_t line) {
  if (flow_id.empty()) throw ParseError("missing flow_id", line);
  if (src.empty()) throw ParseError("missing src", line);
  if (dst.empty()) throw ParseError("missing dst", line);
  if (!(duration > 0.0)) throw ParseError("non-positive duration", line);

  FlowRecord rec;
  rec.flow_id = std::move(flow_id);
  rec.src = std::move(src);
  rec.dst = std::move(dst);
  rec.bytes = bytes;
  rec.duration = duration;
  if (throughput) {
    if (!(*throughput >= 0.0)) throw ParseError("negative throughput", line);
    rec.throughput = *throughput;
    rec.throughput_derived = false;
  } else {
    rec.throughput = compute_throughput(bytes, duration);
    rec.throughput_derived = true;
  }
  return rec;
}

FlowRecord parse_csv_row(std::string_view line, std::size_t line_no) {
  auto fields = split_commas(line);
  if (fields.size() != 5 && fields.size() != 6)
    throw ParseError("expected 5 or 6 fields, got " + std::to_string(fields.size()),
                     line_no);

  auto bytes = detail::parse_u64(fields[3]);
  if (!bytes) throw ParseError("non-numeric bytes", line_no);
  auto duration = detail::parse_double(fields[4]);
  if (!duration) throw ParseError("non-numeric duration", line_no);

  std::optional<double> throughput;
  if (fields.size() == 6 && !fields[5].empty()) {
    throughput = detail::parse_double(fields[5]);
    if (!throughput) throw ParseError("non-numeric throughput", line_no);
  }
  return make_record(std::string(fields[0]), std::string(fields[1]),
                     std::string(fields[2]), *bytes, *duration, throughput,
                     line_no);
}

bool is_csv_header(std::string_view line) {
  auto fields = split_commas(line);
  return !fields.empty() && fields[0] == "flow_id";
}

void check_csv_header(std::string_view line, std::size_t line_no) {
  static constexpr std::string_view expected[] = {"flow_id", "src", "dst",
                                                  "bytes", "duration",
                                                  "throughput"};
  auto fields = split_commas(line);
  if (fields.size() != 5 && fields.size() != 6)
    throw ParseError("malformed header", line_no);
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i] != expected[i])
      throw ParseError("unexpected header column '" + std::string(fields[i]) + "'",
                       line_no);
}

std::string json_string_field(const nlohmann::json& obj, const char* key,
                              std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null())
    throw ParseError(std::string("missing ") + key, line_no);
  if (!it->is_string())
    throw ParseError(std::string("non-string ") + key, line_no);
  return it->get<std::string>();
}

FlowRecord parse_json_row(std::string_view line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw ParseError("invalid JSON", line_no);
  }
  if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);

  auto flow_id = json_string_field(obj, "flow_id", line_no);
  auto src = json_string_field(obj, "src", line_no);
  auto dst = json_string_field(obj, "dst", line_no);

  auto bytes_it = obj.find("bytes");
  if (bytes_it == obj.end() || bytes_it->is_null())
    throw ParseError("missing bytes", line_no);
  if (!bytes_it->is_number_unsigned()) throw ParseError("non-numeric bytes", line_no);
  auto duration_it = obj.find("duration");
  if (duration_it == obj.end() || duration_it->is_null())
    throw ParseError("missing duration", line_no);
  if (!duration_it->is_number()) throw ParseError("non-numeric duration", line_no);

  std::optional<double> throughput;
  if (auto tp = obj.find("throughput"); tp != obj.end() && !tp->is_null()) {
    if (!tp->is_number()) throw ParseError("non-numeric throughput", line_no);
    throughput = tp->get<double>();
  }
  return make_record(std::move(flow_id), std::move(src), std::move(dst),
                     bytes_it->get<std::uint64_t>(), duration_it->get<double>(),
                     throughput, line_no);
}

} // namespace

double compute_throughput(std::uint64_t bytes, double duration) {
  if (!(duration > 0.0))
    throw DomainError("duration must be positive, got " + detail::format_double(duration));
  return static_cast<double>(bytes) * 8.0 / duration;
}

std::vector<FlowRecord> parse_flow_records(std::istream& in, FlowFormat format) {
  std::vector<FlowRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;

    if (format == FlowFormat::csv && first_content && is_csv_header(line)) {
      check_csv_header(line, line_no);
      first_content = false;
      continue;
    }
    first_content = false;

    FlowRecord rec = format == FlowFormat::csv ? parse_csv_row(line, line_no)
                                               : parse_json_row(line, line_no);
    if (!seen.insert(rec.flow_id).second)
      throw DuplicateIdError("duplicate flow_id '" + rec.flow_id + "' at line " +
                             std::to_string(line_no));
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<FlowRecord> parse_flow_records(std::string_view text, FlowFormat format) {
  std::istringstream in{std::string(text)};
  return parse_flow_records(in, format);
}

void write_flow_records(std::ostream& out, std::span<const FlowRecord> records,
                        FlowFormat format) {
  if (format == FlowFormat::json_lines) {
    for (const auto& r : records) {
      nlohmann::json obj = {{"flow_id", r.flow_id}, {"src", r.src}, {"dst", r.dst},
                            {"bytes", r.bytes},     {"duration", r.duration}};
      if (!r.throughput_derived) obj["throughput"] = r.throughput;
      out << obj.dump() << '\n';
    }
    return;
  }

  bool any_supplied = false;
  for (const auto& r : records) any_supplied |= !r.throughput_derived;

  out << "flow_id,src,dst,bytes,duration";
  if (any_supplied) out << ",throughput";
  out << '\n';
  for (const auto& r : records) {
    for (const auto* field : {&r.flow_id, &r.src, &r.dst})
      if (field->find(',') != std::string::npos)
        throw DomainError("field contains a comma: '" + *field + "'");
    out << r.flow_id << ',' << r.src << ',' << r.dst << ',' << r.bytes << ','
        << detail::format_double(r.duration);
    if (any_supplied) {
      out << ',';
      if (!r.throughput_derived) out << detail::format_double(r.throughput);
    }
    out << '\n';
  }
}

} // namespace nlof
