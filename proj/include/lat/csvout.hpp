#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lat {

// Locale-independent %.17g formatting shared by every CSV/point-file writer.
std::string fmt_g17(double v);

/**
 * CSV emitter with a '#' comment preamble (tool version, field label,
 * seed, parameter echo).  Runs with identical configs produce byte-equal
 * output.
 */
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& line);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

    static std::string cell(double v) { return fmt_g17(v); }
    static std::string cell(long long v) { return std::to_string(v); }

private:
    std::ostream& out_;
};

} // namespace lat
