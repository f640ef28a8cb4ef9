#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdela/harness.hpp"
#include "qdela/types.hpp"

namespace qdela {

/// Shortest round-trip-safe text: 17 significant digits, '.' decimal.
std::string format_real(double v);

// Dataset CSV: header x0,...,x{d-1},fitness,b0,b1. Behaviour columns may be
// omitted on read; on write they are left empty for samples without one.
void write_dataset_csv(std::ostream& os, const Dataset& data);
Dataset read_dataset_csv(std::istream& is);
Dataset read_dataset_csv(const std::filesystem::path& path);

// Records CSV: header run_id,eval_count,feature_code,value,status.
inline constexpr const char* records_header = "run_id,eval_count,feature_code,value,status";
std::string format_record(const RunRecord& r);
void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& is);
/// Throws IoError when the file cannot be opened, InvalidArgument on malformed rows.
std::vector<RunRecord> read_records_csv(const std::filesystem::path& path);

} // namespace qdela
