#include "smldm/csv.hpp"

#include <algorithm>
#include <sstream>

namespace smldm {

CsvFormat parse_csv_format(std::string_view text)
{
    if (text == "table") return CsvFormat::Table;
    if (text == "long") return CsvFormat::Long;
    throw ValidationError("format: '" + std::string(text) + "' (expected table or long)");
}

void write_csv(std::ostream& out, const OutputHeader& header, const ResultTable& table, CsvFormat format)
{
    out << "# smldm " << kToolVersion << '\n';
    out << "# command = " << header.command << '\n';
    for (const auto& [key, value] : header.params) {
        out << "# " << key << " = " << value << '\n';
    }
    for (const auto& note : header.notes) {
        out << "# " << note << '\n';
    }
    out << "# clamp_events = " << table.clamp_events << '\n';
    out << "# zero_sinr_events = " << table.zero_sinr_events << '\n';

    const auto stderr_cell = [](const ResultRow& row) {
        return row.se.stderr_bits ? format_double(*row.se.stderr_bits) : std::string{};
    };
    const auto key_cells = [](const ResultRow& row) {
        return std::string(to_string(row.scheme)) + ',' + row.layer + ',' + row.param_name + ',' +
               format_double(row.param_value) + ',' + row.mode;
    };

    if (format == CsvFormat::Long) {
        out << "scheme,layer,param_name,param_value,mode,quantity,value\n";
        for (const auto& row : table.rows) {
            const std::string key = key_cells(row);
            out << key << ",constellation_mi," << format_double(row.se.constellation_mi) << '\n';
            out << key << ",spatial_mi," << format_double(row.se.spatial_mi) << '\n';
            out << key << ",total_se," << format_double(row.se.total_se) << '\n';
            if (row.se.stderr_bits) out << key << ",stderr," << stderr_cell(row) << '\n';
            if (row.gap) out << key << ",gap," << format_double(*row.gap) << '\n';
        }
        return;
    }

    const bool with_gap = std::any_of(table.rows.begin(), table.rows.end(), [](const ResultRow& r) { return r.gap.has_value(); });
    out << "scheme,layer,param_name,param_value,mode,constellation_mi,spatial_mi,total_se,stderr";
    out << (with_gap ? ",gap\n" : "\n");
    for (const auto& row : table.rows) {
        out << key_cells(row) << ',' << format_double(row.se.constellation_mi) << ','
            << format_double(row.se.spatial_mi) << ',' << format_double(row.se.total_se) << ',' << stderr_cell(row);
        if (with_gap) {
            out << ',' << (row.gap ? format_double(*row.gap) : std::string{});
        }
        out << '\n';
    }
}

std::string to_csv(const OutputHeader& header, const ResultTable& table, CsvFormat format)
{
    std::ostringstream out;
    write_csv(out, header, table, format);
    return out.str();
}

}  // namespace smldm
