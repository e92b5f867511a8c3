// Copyright 2026 The csq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csq/io.hpp"

#include <charconv>
#include <cstdio>

namespace csq {

nlohmann::json operator_to_json(const Operator& op) {
  if (op.rows() != op.cols()) throw DimensionMismatch("only square operators are serialized");
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < op.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ri = nlohmann::json::array();
    for (Eigen::Index c = 0; c < op.cols(); ++c) {
      rr.push_back(op(r, c).real());
      ri.push_back(op(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dim", op.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Operator operator_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (dim < 1 || re.size() != static_cast<size_t>(dim) || im.size() != static_cast<size_t>(dim))
    throw DimensionMismatch("operator rows do not match dim");
  Operator op(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& rr = re.at(static_cast<size_t>(r));
    const auto& ri = im.at(static_cast<size_t>(r));
    if (rr.size() != static_cast<size_t>(dim) || ri.size() != static_cast<size_t>(dim))
      throw DimensionMismatch("operator columns do not match dim");
    for (Eigen::Index c = 0; c < dim; ++c)
      op(r, c) = Complex(rr.at(static_cast<size_t>(c)).get<double>(), ri.at(static_cast<size_t>(c)).get<double>());
  }
  return op;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_grid_function_csv(std::ostream& out, const GridFunction& f) {
  out << "coord1,coord2,weight,re,im\n";
  const auto& nodes = f.grid->nodes();
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const PhasePoint x = nodes[static_cast<size_t>(i)];
    out << format_double(x.c1) << ',' << format_double(x.c2) << ',' << format_double(f.grid->weights()(i)) << ','
        << format_double(f.values(i).real()) << ',' << format_double(f.values(i).imag()) << '\n';
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace csq
