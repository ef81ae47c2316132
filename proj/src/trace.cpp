#include "tlmp/trace.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlmp/errors.hpp"

namespace tlmp {

Trace::Trace(Eigen::MatrixXd states, double dt)
    : states_(std::move(states)), dt_(dt) {
  if (states_.rows() < 1) throw std::invalid_argument("trace must have at least one state");
  if (states_.cols() < 1) throw std::invalid_argument("trace states must have dimension >= 1");
  if (!(dt_ > 0.0)) throw std::invalid_argument("trace dt must be positive");
  if (!states_.allFinite()) throw std::invalid_argument("trace states must be finite");
}

namespace {

// Shortest text that round-trips the double.
std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "t";
  for (int j = 0; j < trace.dim(); ++j) out << ",x" << j;
  out << "\n";
  for (int t = 0; t < trace.length(); ++t) {
    out << format_double(t * trace.dt());
    for (int j = 0; j < trace.dim(); ++j) out << "," << format_double(trace.states()(t, j));
    out << "\n";
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_field(const std::string& s, int row) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw EvalError("trace csv: bad number '" + s + "' in row " + std::to_string(row));
  }
}

}  // namespace

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw EvalError("cannot open trace csv " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw EvalError("trace csv is empty: " + path.string());
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "t")
    throw EvalError("trace csv must start with header 't,x0,...'");
  const int dim = static_cast<int>(header.size()) - 1;
  if (dim < 1) throw EvalError("trace csv header has no state columns");

  std::vector<double> times;
  std::vector<double> values;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != dim + 1)
      throw EvalError("trace csv row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(dim + 1));
    times.push_back(parse_field(fields[0], row));
    for (int j = 1; j <= dim; ++j) values.push_back(parse_field(fields[j], row));
  }
  if (times.empty()) throw EvalError("trace csv has no data rows");

  double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
  if (times.size() > 1 && !(dt > 0.0)) throw EvalError("trace csv time must increase");
  for (size_t t = 0; t < times.size(); ++t) {
    double expect = times[0] + dt * static_cast<double>(t);
    if (std::abs(times[t] - expect) > 1e-6 * std::max(1.0, std::abs(expect)))
      throw EvalError("trace csv is not uniformly sampled at row " + std::to_string(t + 1));
  }

  Eigen::MatrixXd states(static_cast<int>(times.size()), dim);
  for (int t = 0; t < states.rows(); ++t)
    for (int j = 0; j < dim; ++j) states(t, j) = values[t * dim + j];
  return Trace(std::move(states), dt);
}

}  // namespace tlmp
