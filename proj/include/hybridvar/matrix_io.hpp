#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridvar/core.hpp"
#include "hybridvar/hessian.hpp"

namespace hybridvar {

/// Binary matrix file layout (all integers and floats little-endian):
///
///   offset 0   8 bytes   magic "HYBVMAT1"
///   offset 8   uint64    rows
///   offset 16  uint64    cols
///   offset 24  float64   rows * cols entries, row-major
inline constexpr std::array<char, 8> kMatrixMagic = {'H', 'Y', 'B', 'V', 'M', 'A', 'T', '1'};

void write_matrix_binary(std::ostream& out, const MatrixXd& m);
MatrixXd read_matrix_binary(std::istream& in);
void write_matrix_binary(const std::filesystem::path& path, const MatrixXd& m);
MatrixXd read_matrix_binary(const std::filesystem::path& path);

/// One row per line, comma separated, 17 significant digits.
void write_matrix_csv(std::ostream& out, const MatrixXd& m);
void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m);

/// Shortest round-trip-safe text for a double; infinities as "inf"/"-inf".
std::string format_double(double value);

nlohmann::json provenance_json(const HessianMatrix<double>& s);

/// Writes `<stem>.bin` with the matrix and `<stem>.json` with its provenance.
void write_hessian(const std::filesystem::path& stem, const HessianMatrix<double>& s);

}  // namespace hybridvar
