#ifndef MLORC_CSV_IO_HPP
#define MLORC_CSV_IO_HPP

#include <string>
#include <vector>

#include "mlorc/runner.hpp"

namespace mlorc {

// Fixed header, LF newlines, 17 significant digits, empty cells for
// inapplicable columns. Column order never depends on the optimizer kind.
inline constexpr const char* kCsvHeader =
    "step,loss,grad_l11,grad_frob,topk_g,topk_m,topk_v,comp_err_m,zeta,state_elements";

void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

std::string to_csv(const std::vector<RunRecord>& records);

std::vector<RunRecord> parse_csv_file(const std::string& path);

std::vector<RunRecord> parse_csv(const std::string& text);

}  // namespace mlorc

#endif
