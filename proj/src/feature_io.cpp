#include "topofeat/feature_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "topofeat/format.hpp"

namespace topofeat {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

static_assert(std::endian::native == std::endian::little, "columnar writer assumes little-endian");

constexpr std::array<char, 8> kMagic = {'T', 'F', 'C', 'O', 'L', '0', '0', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("truncated columnar file");
  return v;
}

std::string get_string(std::istream& in) {
  const auto len = get<std::uint32_t>(in);
  std::string s(len, '\0');
  if (len && !in.read(s.data(), len)) throw IoError("truncated columnar file");
  return s;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

}  // namespace

void write_feature_csv(std::ostream& out, const FeatureMatrix& matrix) {
  for (const auto& name : matrix.names) out << name << ',';
  out << "label\n";
  for (const auto& row : matrix.rows) {
    for (double v : row.values) out << format_real(v) << ',';
    out << csv_field(row.label) << '\n';
  }
}

void write_feature_columnar(std::ostream& out, const FeatureMatrix& matrix) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.names.size() + 1));
  put<std::uint64_t>(out, matrix.rows.size());
  for (const auto& name : matrix.names) put_string(out, name);
  put_string(out, "label");
  for (std::size_t c = 0; c < matrix.names.size(); ++c)
    for (const auto& row : matrix.rows) put<double>(out, row.values.at(c));
  for (const auto& row : matrix.rows) put_string(out, row.label);
}

FeatureMatrix read_feature_columnar(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw IoError("not a topofeat columnar file");
  const auto ncols = get<std::uint32_t>(in);
  const auto nrows = get<std::uint64_t>(in);
  if (ncols == 0) throw IoError("columnar file without label column");
  FeatureMatrix m;
  for (std::uint32_t c = 0; c + 1 < ncols; ++c) m.names.push_back(get_string(in));
  if (get_string(in) != "label") throw IoError("columnar file: last column must be label");
  m.rows.resize(nrows);
  for (auto& row : m.rows) row.values.resize(m.names.size());
  for (std::size_t c = 0; c < m.names.size(); ++c)
    for (auto& row : m.rows) row.values[c] = get<double>(in);
  for (auto& row : m.rows) row.label = get_string(in);
  return m;
}

}  // namespace topofeat
