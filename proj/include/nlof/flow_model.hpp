#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlof {

/// One observed flow. Throughput is in bits/second.
struct FlowRecord {
  std::string flow_id;
  std::string src;
  std::string dst;
  std::uint64_t bytes = 0;
  double duration = 0.0;   // seconds
  double throughput = 0.0; // bits/second
  /// False when the input supplied the throughput column explicitly.
  bool throughput_derived = true;

  friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

enum class FlowFormat { csv, json_lines };

/// bytes * 8 / duration. Throws DomainError unless duration > 0.
double compute_throughput(std::uint64_t bytes, double duration);

/// Parses flow records, preserving input order.
///
/// CSV columns are `flow_id,src,dst,bytes,duration[,throughput]`; a leading
/// header row is optional. JSON-lines objects use the same field names. Empty
/// lines are skipped. Throws ParseError (with line number) on malformed rows
/// and DuplicateIdError when a flow_id repeats.
std::vector<FlowRecord> parse_flow_records(std::istream& in, FlowFormat format);
std::vector<FlowRecord> parse_flow_records(std::string_view text, FlowFormat format);

/// Writes records so that parse_flow_records reproduces them field for field.
/// The throughput column is only emitted for records that did not derive it.
void write_flow_records(std::ostream& out, std::span<const FlowRecord> records,
                        FlowFormat format);

} // namespace nlof
