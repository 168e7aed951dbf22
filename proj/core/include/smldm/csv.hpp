#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "smldm/config.hpp"
#include "smldm/experiments.hpp"

namespace smldm {

inline constexpr const char* kToolVersion = "1.0.0";

/// Provenance block written as `# ` lines ahead of the CSV body.
struct OutputHeader {
    std::string command;
    ParamMap params;
    std::vector<std::string> notes;
};

enum class CsvFormat {
    /// scheme,layer,param_name,param_value,mode,constellation_mi,spatial_mi,total_se,stderr[,gap]
    Table,
    /// scheme,layer,param_name,param_value,mode,quantity,value
    Long,
};

CsvFormat parse_csv_format(std::string_view text);

/// LF line endings, '.' decimals and ',' separators regardless of locale.
/// The gap column is emitted only when some row carries a gap.
void write_csv(std::ostream& out, const OutputHeader& header, const ResultTable& table,
               CsvFormat format = CsvFormat::Table);

std::string to_csv(const OutputHeader& header, const ResultTable& table, CsvFormat format = CsvFormat::Table);

}  // namespace smldm
