#ifndef RLSGAN_IO_HPP
#define RLSGAN_IO_HPP

#include <string>
#include <vector>

namespace rlsgan::io {

// Shortest round-trippable decimal form of v.
std::string format_double(double v);

// Writes to a temporary file in the target directory, then renames, so a
// failure never leaves a partial file at `path`.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Splits file content into lines; tolerates CRLF and a missing final
// newline.
std::vector<std::string> split_lines(const std::string& content);

std::vector<std::string> split_csv_row(const std::string& line);

// strtod with full-consumption check; `line_no` is 1-based and used in
// the error message.
double parse_double(const std::string& token, std::size_t line_no);
long parse_long(const std::string& token, std::size_t line_no);

// True if any field of the row fails to parse as a number (used to
// detect header lines).
bool looks_like_header(const std::string& line);

}  // namespace rlsgan::io

#endif  // RLSGAN_IO_HPP
