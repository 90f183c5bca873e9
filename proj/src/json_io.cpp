#include "tq/json_io.hpp"

#include <fstream>
#include <sstream>

#include "tq/groups.hpp"

namespace tq {
namespace jsonio {

namespace {

Json bigrational_to_json(const Rational& r) {
  // Strings keep arbitrary-precision values exact through JSON.
  return r.str();
}

Rational bigrational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational(j.get<std::string>());
  throw error("BadJson", "expected an integer or a rational string");
}

long long ll_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw error("BadJson", std::string("expected an integer for ") + what);
  return j.get<long long>();
}

}  // namespace

Json ring_to_json(const RingSpec& s) {
  Json j;
  j["name"] = s.to_string();
  j["p"] = s.p;
  j["a"] = s.a;
  j["n"] = s.n;
  return j;
}

RingSpec ring_from_json(const Json& j) {
  if (!j.is_object()) throw error("BadJson", "ring must be an object");
  RingSpec s;
  s.p = j.contains("p") ? ll_from_json(j.at("p"), "ring p") : 0;
  s.a = j.contains("a") ? static_cast<int>(ll_from_json(j.at("a"), "ring a")) : 1;
  s.n = j.contains("n") ? static_cast<int>(ll_from_json(j.at("n"), "ring n")) : 1;
  if (s.p == 0) return RingSpec::rationals();
  if (!is_odd_prime(s.p))
    throw error("BadRing", "p must be 0 (rationals) or an odd prime");
  if (s.a < 1 || s.n < 1) throw error("BadRing", "require a >= 1 and n >= 1");
  return s;
}

Json element_to_json(const RingElement& x) {
  if (x.spec.is_rational()) return bigrational_to_json(x.rat);
  if (x.spec.n == 1) return x.c[0];
  Json arr = Json::array();
  for (long long v : x.c) arr.push_back(v);
  return arr;
}

RingElement element_from_json(const Json& j, const RingSpec& spec) {
  if (spec.is_rational()) return re_from_rational(spec, bigrational_from_json(j));
  if (j.is_number_integer()) return re_from_int(spec, j.get<long long>());
  if (j.is_array()) {
    if (static_cast<int>(j.size()) > spec.n)
      throw error("BadJson", "element has more eps coefficients than the ring");
    RingElement x = re_zero(spec);
    for (int k = 0; k < static_cast<int>(j.size()); ++k) {
      long long v = ll_from_json(j.at(k), "element coefficient");
      x = x + re_from_int(spec, v) * re_monomial(spec, k, 0);
    }
    return x;
  }
  throw error("BadJson", "expected an integer or coefficient array");
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(element_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const RingSpec& spec) {
  if (!j.is_array()) throw error("BadJson", "matrix must be an array of rows");
  int rows = static_cast<int>(j.size());
  if (rows == 0) return Matrix(spec, 0, 0);
  if (!j.at(0).is_array()) throw error("BadJson", "matrix rows must be arrays");
  int cols = static_cast<int>(j.at(0).size());
  Matrix m(spec, rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Json& row = j.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw error("BadJson", "matrix rows have inconsistent lengths");
    for (int k = 0; k < cols; ++k)
      m.at(i, k) = element_from_json(row.at(k), spec);
  }
  return m;
}

Json partition_to_json(const Partition& sigma) {
  Json arr = Json::array();
  for (int part : sigma.parts) arr.push_back(part);
  return arr;
}

Partition partition_from_json(const Json& j) {
  if (j.is_string()) return Partition::parse(j.get<std::string>());
  if (!j.is_array()) throw error("BadJson", "partition must be an array");
  Partition sigma;
  for (const Json& part : j)
    sigma.parts.push_back(static_cast<int>(ll_from_json(part, "partition part")));
  return Partition(sigma.parts);
}

Json orbit_to_json(const OrbitRep& rep) {
  Json j;
  j["family"] = family_name(rep.family);
  j["m"] = rep.m;
  j["sigma"] = partition_to_json(rep.sigma);
  j["ring"] = ring_to_json(rep.ring);
  Json blocks = Json::array();
  for (const OrbitBlock& b : rep.blocks) {
    Json jb;
    jb["d"] = b.d;
    jb["paired"] = b.paired;
    jb["offset"] = b.offset;
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  Json labels = Json::array();
  for (const OrbitLabel& l : rep.labels) {
    Json jl;
    jl["block"] = l.block;
    jl["pos"] = l.pos;
    jl["primed"] = l.primed;
    labels.push_back(std::move(jl));
  }
  j["labels"] = std::move(labels);
  j["N"] = matrix_to_json(rep.N);
  j["gram"] = matrix_to_json(rep.gram);
  return j;
}

OrbitRep orbit_from_json(const Json& j) {
  if (!j.is_object()) throw error("BadJson", "orbit must be an object");
  OrbitRep rep;
  rep.family = family_parse(j.at("family").get<std::string>());
  rep.m = static_cast<int>(ll_from_json(j.at("m"), "orbit m"));
  rep.sigma = partition_from_json(j.at("sigma"));
  rep.ring = ring_from_json(j.at("ring"));
  for (const Json& jb : j.at("blocks")) {
    OrbitBlock b;
    b.d = static_cast<int>(ll_from_json(jb.at("d"), "block d"));
    b.paired = jb.at("paired").get<bool>();
    b.offset = static_cast<int>(ll_from_json(jb.at("offset"), "block offset"));
    rep.blocks.push_back(b);
  }
  for (const Json& jl : j.at("labels")) {
    OrbitLabel l;
    l.block = static_cast<int>(ll_from_json(jl.at("block"), "label block"));
    l.pos = static_cast<int>(ll_from_json(jl.at("pos"), "label pos"));
    l.primed = jl.at("primed").get<bool>();
    rep.labels.push_back(l);
  }
  rep.N = matrix_from_json(j.at("N"), rep.ring);
  rep.gram = matrix_from_json(j.at("gram"), rep.ring);
  return rep;
}

Json tqrep_to_json(const deform::TqRep& rep) {
  Json j;
  j["ring"] = ring_to_json(rep.group.ring);
  j["family"] = family_name(rep.group.family);
  j["q"] = rep.q;
  j["gram"] = matrix_to_json(rep.group.gram);
  j["phi"] = matrix_to_json(rep.phi);
  j["nilpotent"] = matrix_to_json(rep.nil);
  return j;
}

deform::TqRep tqrep_from_json(const Json& j) {
  if (!j.is_object()) throw error("BadJson", "representation must be an object");
  RingSpec ring = ring_from_json(j.at("ring"));
  Family family = family_parse(j.at("family").get<std::string>());
  deform::TqRep rep;
  if (family_has_form(family)) {
    Matrix gram = matrix_from_json(j.at("gram"), ring);
    rep.group = GroupSpec::with_gram(family, gram);
  } else {
    int m = static_cast<int>(j.at("phi").size());
    rep.group = GroupSpec::standard(family, m, ring);
  }
  rep.q = ll_from_json(j.at("q"), "q");
  rep.phi = matrix_from_json(j.at("phi"), ring);
  rep.nil = matrix_from_json(j.at("nilpotent"), ring);
  return rep;
}

Json certificate_to_json(const deform::ObstructionCertificate& cert) {
  Json j;
  j["degree"] = cert.degree;
  j["ring"] = ring_to_json(cert.A.spec);
  j["A"] = matrix_to_json(cert.A);
  j["b"] = matrix_to_json(cert.b);
  j["f"] = matrix_to_json(cert.f);
  return j;
}

deform::ObstructionCertificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw error("BadJson", "certificate must be an object");
  deform::ObstructionCertificate cert;
  cert.degree = static_cast<int>(ll_from_json(j.at("degree"), "degree"));
  RingSpec ring = ring_from_json(j.at("ring"));
  cert.A = matrix_from_json(j.at("A"), ring);
  cert.b = matrix_from_json(j.at("b"), ring);
  cert.f = matrix_from_json(j.at("f"), ring);
  return cert;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string checksum(const Json& j) {
  std::uint64_t h = fnv1a(j.dump());
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << h;
  return os.str();
}

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("FileUnreadable", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw error("BadJson", path + ": " + ex.what());
  }
  return j;
}

void save_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw error("FileUnwritable", "cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace jsonio
}  // namespace tq
