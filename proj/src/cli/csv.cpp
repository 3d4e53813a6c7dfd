#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "toda/cli.hpp"
#include "toda/error.hpp"

namespace toda::cli {

namespace {

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidArgument("csv: line " + std::to_string(line) + ": cannot parse '" +
                          std::string(field) + "' as a number");
  }
  return value;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

} // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_trajectory_csv(std::ostream& out, const TodaTrajectory& trajectory) {
  const std::size_t n = trajectory.lattice_size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",b" << i;
  for (std::size_t i = 1; i < n; ++i) out << ",a" << i;
  out << '\n';
  for (std::size_t r = 0; r < trajectory.times.size(); ++r) {
    const JacobiMatrix& state = trajectory.states[r];
    out << format_double(trajectory.times[r]);
    for (double b : state.diag()) out << ',' << format_double(b);
    for (double a : state.offdiag()) out << ',' << format_double(a);
    out << '\n';
  }
}

TodaTrajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv: missing header row");
  const auto header = split(line);
  if (header.empty() || header[0] != "t" || header.size() % 2 != 0) {
    throw InvalidArgument("csv: header must be t,b1..bN,a1..a{N-1}");
  }
  const std::size_t n = header.size() / 2;
  for (std::size_t i = 1; i <= n; ++i) {
    if (header[i] != "b" + std::to_string(i)) throw InvalidArgument("csv: unexpected column " + header[i]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (header[n + i] != "a" + std::to_string(i)) {
      throw InvalidArgument("csv: unexpected column " + header[n + i]);
    }
  }

  TodaTrajectory trajectory;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw InvalidArgument("csv: line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(header.size()));
    }
    trajectory.times.push_back(parse_double(fields[0], line_no));
    std::vector<double> diag(n);
    std::vector<double> offdiag(n - 1);
    for (std::size_t i = 0; i < n; ++i) diag[i] = parse_double(fields[1 + i], line_no);
    for (std::size_t i = 0; i + 1 < n; ++i) offdiag[i] = parse_double(fields[1 + n + i], line_no);
    trajectory.states.emplace_back(std::move(diag), std::move(offdiag));
  }
  return trajectory;
}

void write_table_csv(std::ostream& out, const std::string& prefix,
                     const std::vector<double>& times,
                     const std::vector<std::vector<double>>& rows) {
  out << "t";
  const std::size_t width = rows.empty() ? 0 : rows.front().size();
  for (std::size_t k = 0; k < width; ++k) out << ',' << prefix << k;
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << format_double(times[r]);
    for (double v : rows[r]) out << ',' << format_double(v);
    out << '\n';
  }
}

} // namespace toda::cli
