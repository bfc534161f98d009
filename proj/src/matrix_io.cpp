#include "hybridvar/matrix_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace hybridvar {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  require(in.gcount() == 8, ErrorCode::IoError, "truncated matrix file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_matrix_binary(std::ostream& out, const MatrixXd& m) {
  out.write(kMatrixMagic.data(), kMatrixMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) put_u64(out, std::bit_cast<std::uint64_t>(m(i, j)));
  require(out.good(), ErrorCode::IoError, "failed writing matrix");
}

MatrixXd read_matrix_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  require(in.gcount() == 8 && magic == kMatrixMagic, ErrorCode::IoError, "bad matrix magic");
  const std::uint64_t rows = get_u64(in);
  const std::uint64_t cols = get_u64(in);
  require(rows < (1u << 24) && cols < (1u << 24), ErrorCode::IoError, "implausible matrix size");
  MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = std::bit_cast<double>(get_u64(in));
  return m;
}

void write_matrix_binary(const std::filesystem::path& path, const MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), ErrorCode::IoError, "cannot open " + path.string());
  write_matrix_binary(out, m);
}

MatrixXd read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), ErrorCode::IoError, "cannot open " + path.string());
  return read_matrix_binary(in);
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_matrix_csv(std::ostream& out, const MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const MatrixXd& m) {
  std::ofstream out(path);
  require(out.is_open(), ErrorCode::IoError, "cannot open " + path.string());
  write_matrix_csv(out, m);
}

nlohmann::json provenance_json(const HessianMatrix<double>& s) {
  nlohmann::json j;
  j["preconditioned"] = s.preconditioned;
  j["beta"] = s.beta;
  j["rows"] = s.data.rows();
  j["state_dim"] = s.provenance.state_dim;
  j["ensemble_size"] = s.provenance.ensemble_size;
  const auto& bg = s.provenance.background;
  nlohmann::json b = nlohmann::json::object();
  if (bg.length_scale) b["length_scale"] = *bg.length_scale;
  if (bg.variance) b["variance"] = *bg.variance;
  if (bg.beta) b["beta"] = *bg.beta;
  if (bg.ensemble_size) b["ensemble_size"] = *bg.ensemble_size;
  if (bg.seed) b["seed"] = *bg.seed;
  j["background"] = b;
  return j;
}

void write_hessian(const std::filesystem::path& stem, const HessianMatrix<double>& s) {
  auto bin = stem;
  bin += ".bin";
  write_matrix_binary(bin, s.data);
  auto side = stem;
  side += ".json";
  std::ofstream out(side);
  require(out.is_open(), ErrorCode::IoError, "cannot open " + side.string());
  out << provenance_json(s).dump(2) << '\n';
}

}  // namespace hybridvar
