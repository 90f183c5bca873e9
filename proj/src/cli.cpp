#include "tq/cli.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tq/centralizers.hpp"
#include "tq/deform.hpp"
#include "tq/explog.hpp"
#include "tq/groups.hpp"

namespace tq {
namespace cli {

namespace {

using jsonio::Json;

std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ' ';
    out += args[i];
  }
  return out;
}

// "--ring p=7,a=2,n=3" with missing keys defaulting to a = n = 1; empty
// text or p=0 selects the rationals.
RingSpec parse_ring_flag(const std::string& text) {
  if (text.empty() || text == "q" || text == "rationals")
    return RingSpec::rationals();
  long long p = 0, a = 1, n = 1;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw error("BadRing", "ring component '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    long long val = 0;
    try {
      val = std::stoll(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw error("BadRing", "ring component '" + item + "' is not numeric");
    }
    if (key == "p") p = val;
    else if (key == "a") a = val;
    else if (key == "n") n = val;
    else throw error("BadRing", "unknown ring key '" + key + "'");
  }
  if (p == 0) {
    if (a != 1 || n != 1)
      throw error("BadRing", "the rationals take no a or n component");
    return RingSpec::rationals();
  }
  RingSpec base = a > 1 ? RingSpec::mod_prime_power(p, static_cast<int>(a))
                        : RingSpec::prime_field(p);
  return n > 1 ? RingSpec::eps_trunc(base, static_cast<int>(n)) : base;
}

// "1,2" -> {1, 2}; empty text is the trivial flag.
std::vector<int> parse_flag_list(const std::string& text) {
  std::vector<int> flag;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      flag.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw error("BadFlag", "flag component '" + item + "' is not numeric");
    }
  }
  return flag;
}

// Matrix input file {"ring": {...}, "matrix": [[...]]}; a --ring override
// reinterprets the written entries over the requested ring.
Matrix load_matrix_file(const std::string& path, const std::string& ring_flag,
                        RingSpec* used) {
  Json j = jsonio::load_file(path);
  if (!j.is_object() || !j.contains("matrix"))
    throw error("BadJson", path + ": expected {\"ring\", \"matrix\"}");
  RingSpec ring;
  if (!ring_flag.empty()) ring = parse_ring_flag(ring_flag);
  else if (j.contains("ring")) ring = jsonio::ring_from_json(j.at("ring"));
  else throw error("BadJson", path + ": no ring given in the file or --ring");
  if (used) *used = ring;
  return jsonio::matrix_from_json(j.at("matrix"), ring);
}

OrbitRep load_orbit_file(const std::string& path, const std::string& ring_flag) {
  OrbitRep rep = jsonio::orbit_from_json(jsonio::load_file(path));
  if (!ring_flag.empty()) {
    RingSpec target = parse_ring_flag(ring_flag);
    if (!(target == rep.ring))
      rep = orbits::build_representative(rep.sigma, rep.family, rep.m, target);
  }
  return rep;
}

Json structure_to_json(const centralizers::Structure& st) {
  Json j;
  Json factors = Json::array();
  for (const centralizers::Factor& f : st.factors) {
    Json jf;
    jf["s"] = f.s;
    jf["d"] = f.d;
    jf["l"] = f.l;
    switch (f.kind) {
      case centralizers::FactorKind::GL: jf["kind"] = "gl"; break;
      case centralizers::FactorKind::Orthogonal: jf["kind"] = "orthogonal"; break;
      case centralizers::FactorKind::Symplectic: jf["kind"] = "symplectic"; break;
    }
    factors.push_back(std::move(jf));
  }
  j["factors"] = std::move(factors);
  j["dim_reductive"] = st.dim_reductive;
  j["t"] = st.t;
  j["component_order"] = st.component_order;
  return j;
}

Json graded_to_json(const centralizers::GradedDims& gd) {
  Json by = Json::object();
  for (const auto& [w, d] : gd.by_weight) by[std::to_string(w)] = d;
  Json j;
  j["by_weight"] = std::move(by);
  j["total"] = gd.total;
  return j;
}

Json tangent_to_json(const deform::TangentReport& tr) {
  Json j;
  j["dim_lifting"] = tr.dim_lifting;
  j["dim_h0"] = tr.dim_h0;
  j["dim_h0_ad0"] = tr.dim_h0_ad0;
  j["dim_deformation"] = tr.dim_deformation;
  return j;
}

// Shared option set of the deform subcommands.
struct DeformArgs {
  std::string rep_path;
  std::string cond;
  std::string orbit_path;
  std::string flag_text;
  std::string mode = "eps";
  long long nu = 1;
  int steps = 1;
  int depth = 3;
  int threads = 1;
};

deform::TqRep load_rep(const std::string& path) {
  deform::TqRep rep = jsonio::tqrep_from_json(jsonio::load_file(path));
  std::vector<std::string> problems = deform::validate(rep);
  if (!problems.empty())
    throw error("InvalidRepresentation", problems.front());
  return rep;
}

deform::LiftCondition build_condition(const DeformArgs& a, bool nu_set,
                                      const deform::TqRep& rep) {
  using deform::LiftCondition;
  if (a.cond == "unrestricted") return LiftCondition::unrestricted();
  if (a.cond == "fixed-similitude") return LiftCondition::fixed_similitude(a.nu);
  if (a.cond == "minimally-ramified") {
    if (a.orbit_path.empty())
      throw error("MissingOrbit",
                  "--cond minimally-ramified needs --orbit <rep.json>");
    OrbitRep orb = jsonio::orbit_from_json(jsonio::load_file(a.orbit_path));
    if (!(orb.ring == rep.ring()))
      orb = orbits::build_representative(orb.sigma, orb.family, orb.m,
                                         rep.ring());
    std::optional<long long> nu;
    if (nu_set) nu = a.nu;
    return LiftCondition::minimally_ramified(std::move(orb), nu);
  }
  if (a.cond == "parabolic-ramified")
    return LiftCondition::parabolic_ramified(parse_flag_list(a.flag_text));
  throw error("BadCondition", "unknown condition '" + a.cond + "'");
}

Json deform_context(const deform::TqRep& rep) {
  Json ctx;
  ctx["ring"] = jsonio::ring_to_json(rep.ring());
  ctx["family"] = family_name(rep.group.family);
  ctx["m"] = rep.group.m;
  ctx["q"] = rep.q;
  return ctx;
}

std::string ring_name(const RingSpec& s) { return s.to_string(); }

// ------------------------------------------------------------ subcommands

void run_partitions_enumerate(Json& report, std::string& summary,
                              const std::string& family_text, int m) {
  Family f = family_parse(family_text);
  Json ctx;
  ctx["family"] = family_name(f);
  ctx["m"] = m;
  report["context"] = std::move(ctx);
  std::vector<Partition> all = partitions::enumerate_admissible(m, f);
  Json list = Json::array();
  std::string names;
  for (const Partition& sigma : all) {
    list.push_back(jsonio::partition_to_json(sigma));
    if (!names.empty()) names += ", ";
    names += sigma.to_string();
  }
  Json result;
  result["count"] = all.size();
  result["partitions"] = std::move(list);
  report["result"] = std::move(result);
  std::ostringstream os;
  os << all.size() << " admissible partition" << (all.size() == 1 ? "" : "s")
     << " of " << m << " for " << family_name(f) << ": " << names;
  summary = os.str();
}

void run_partitions_diagnostics(Json& report, std::string& summary,
                                const std::string& sigma_text) {
  Partition sigma = Partition::parse(sigma_text);
  Json ctx;
  ctx["sigma"] = jsonio::partition_to_json(sigma);
  report["context"] = std::move(ctx);
  int d1 = sigma.parts.empty() ? 1 : sigma.parts.front();
  Json weights = Json::array();
  for (int s = -(d1 - 1); s <= d1 - 1; ++s) {
    Json jw;
    jw["s"] = s;
    jw["dim"] = partitions::weight_dim(sigma, s);
    weights.push_back(std::move(jw));
  }
  Json lowest = Json::array();
  for (int s = -(d1 - 1); s <= 0; ++s) {
    Json jl;
    jl["s"] = s;
    jl["dim"] = partitions::lowest_weight_dim(sigma, s);
    lowest.push_back(std::move(jl));
  }
  partitions::FormulaDiagnostics fd = partitions::formula_diagnostics(sigma);
  Json result;
  result["weights"] = std::move(weights);
  result["lowest_weights"] = std::move(lowest);
  result["weight_mismatch"] = fd.weight_mismatch;
  result["lowest_mismatch"] = fd.lowest_mismatch;
  result["discrepancy"] =
      !fd.weight_mismatch.empty() || !fd.lowest_mismatch.empty();
  report["result"] = std::move(result);
  std::ostringstream os;
  if (fd.weight_mismatch.empty() && fd.lowest_mismatch.empty()) {
    os << "closed forms match the direct counts for " << sigma.to_string();
  } else {
    os << "closed-form mismatch for " << sigma.to_string() << ":";
    if (!fd.weight_mismatch.empty()) {
      os << " weight dims at s =";
      for (int s : fd.weight_mismatch) os << ' ' << s;
    }
    if (!fd.lowest_mismatch.empty()) {
      os << (fd.weight_mismatch.empty() ? "" : ";") << " lowest-weight dims at s =";
      for (int s : fd.lowest_mismatch) os << ' ' << s;
    }
  }
  summary = os.str();
}

void run_orbits_build(Json& report, std::string& summary,
                      const std::string& family_text, int m,
                      const std::string& partition_text,
                      const std::string& ring_text,
                      const std::string& out_path) {
  Family f = family_parse(family_text);
  Partition sigma = Partition::parse(partition_text);
  RingSpec ring = parse_ring_flag(ring_text);
  Json ctx;
  ctx["family"] = family_name(f);
  ctx["m"] = m;
  ctx["sigma"] = jsonio::partition_to_json(sigma);
  ctx["ring"] = jsonio::ring_to_json(ring);
  report["context"] = std::move(ctx);
  OrbitRep rep = orbits::build_representative(sigma, f, m, ring);
  Json result = jsonio::orbit_to_json(rep);
  if (!out_path.empty()) jsonio::save_file(out_path, result);
  report["result"] = std::move(result);
  std::ostringstream os;
  os << "built the " << family_name(f) << " " << sigma.to_string()
     << " representative over " << ring_name(ring) << " (" << m << " x " << m
     << ")";
  if (!out_path.empty()) os << ", written to " << out_path;
  summary = os.str();
}

void run_orbits_jordan(Json& report, std::string& summary,
                       const std::string& in_path,
                       const std::string& ring_text, long long purity_p) {
  RingSpec ring;
  Matrix N = load_matrix_file(in_path, ring_text, &ring);
  Json ctx;
  ctx["ring"] = jsonio::ring_to_json(ring);
  report["context"] = std::move(ctx);
  Partition type = orbits::jordan_type(N);
  Json result;
  result["jordan"] = jsonio::partition_to_json(type);
  std::ostringstream os;
  os << "jordan type " << type.to_string() << " over " << ring_name(ring);
  if (purity_p > 0) {
    if (!ring.is_rational())
      throw error("BadRing", "--p purity comparison needs a rational input");
    orbits::PurityReport pr = orbits::purity(N, purity_p);
    Json jp;
    jp["p"] = purity_p;
    jp["pure"] = pr.pure;
    jp["over_q"] = jsonio::partition_to_json(pr.over_q);
    jp["residue"] = jsonio::partition_to_json(pr.residue);
    result["purity"] = std::move(jp);
    os << "; " << (pr.pure ? "pure" : "impure") << " at p = " << purity_p
       << " (residue type " << pr.residue.to_string() << ")";
  }
  report["result"] = std::move(result);
  summary = os.str();
}

void run_orbits_normalize(Json& report, std::string& summary,
                          const std::string& in_path,
                          const std::string& ring_text) {
  OrbitRep rep = load_orbit_file(in_path, ring_text);
  Json ctx;
  ctx["family"] = family_name(rep.family);
  ctx["m"] = rep.m;
  ctx["sigma"] = jsonio::partition_to_json(rep.sigma);
  ctx["ring"] = jsonio::ring_to_json(rep.ring);
  report["context"] = std::move(ctx);
  orbits::NormalizeResult nr = orbits::normalize_to_standard(rep);
  if (!nr.C) {
    long long radicand = nr.missing.value_or(0);
    throw error("MissingSquareRoot",
                "the ring has no square root of " + std::to_string(radicand));
  }
  Matrix check = transpose(*nr.C) * rep.gram * *nr.C;
  Json result;
  result["C"] = jsonio::matrix_to_json(*nr.C);
  result["J_std"] = jsonio::matrix_to_json(nr.J_std);
  result["verified"] = check == nr.J_std;
  report["result"] = std::move(result);
  std::ostringstream os;
  os << "normalized the " << family_name(rep.family) << " "
     << rep.sigma.to_string() << " pairing to the standard form over "
     << ring_name(rep.ring) << " (exact check "
     << (check == nr.J_std ? "passed" : "failed") << ")";
  summary = os.str();
}

void run_centralizer(Json& report, std::string& summary,
                     const std::string& rep_path,
                     const std::string& ring_text) {
  OrbitRep rep = load_orbit_file(rep_path, ring_text);
  Json ctx;
  ctx["family"] = family_name(rep.family);
  ctx["m"] = rep.m;
  ctx["sigma"] = jsonio::partition_to_json(rep.sigma);
  ctx["ring"] = jsonio::ring_to_json(rep.ring);
  report["context"] = std::move(ctx);
  centralizers::Structure st =
      centralizers::centralizer_structure(rep.sigma, rep.family);
  OrbitRep frep = rep;
  if (!rep.ring.is_field())
    frep = orbits::build_representative(rep.sigma, rep.family, rep.m,
                                        rep.ring.residue_field());
  bool formed = family_has_form(rep.family);
  centralizers::AlgebraBasis alg = centralizers::centralizer_algebra(frep, formed);
  centralizers::GradedDims gd = centralizers::centralizer_graded(frep, formed);
  std::vector<centralizers::Section> sections =
      centralizers::component_sections(rep);
  Json result;
  result["structure"] = structure_to_json(st);
  result["algebra_ring"] = jsonio::ring_to_json(frep.ring);
  result["algebra_dim"] = alg.dim;
  result["graded"] = graded_to_json(gd);
  Json js = Json::array();
  for (const centralizers::Section& s : sections) {
    Json one;
    Json tup = Json::array();
    for (const auto& [sw, iota] : s.tuple) tup.push_back(Json::array({sw, iota}));
    one["tuple"] = std::move(tup);
    one["g"] = jsonio::matrix_to_json(s.g);
    js.push_back(std::move(one));
  }
  result["sections"] = std::move(js);
  report["result"] = std::move(result);
  std::ostringstream os;
  os << "centralizer of " << family_name(rep.family) << " "
     << rep.sigma.to_string() << ": algebra dim " << alg.dim << " over "
     << ring_name(frep.ring) << ", reductive dim " << st.dim_reductive
     << ", component order " << st.component_order << ", " << sections.size()
     << " section" << (sections.size() == 1 ? "" : "s") << " over "
     << ring_name(rep.ring);
  summary = os.str();
}

void run_explog(Json& report, std::string& summary, bool is_exp,
                const std::string& in_path, const std::string& ring_text) {
  RingSpec ring;
  Matrix A = load_matrix_file(in_path, ring_text, &ring);
  Json ctx;
  ctx["ring"] = jsonio::ring_to_json(ring);
  report["context"] = std::move(ctx);
  Matrix out = is_exp ? explog::trunc_exp(A) : explog::trunc_log(A);
  Json result;
  result["matrix"] = jsonio::matrix_to_json(out);
  report["result"] = std::move(result);
  std::ostringstream os;
  os << (is_exp ? "exp" : "log") << " of a " << A.rows << " x " << A.cols
     << " matrix over " << ring_name(ring);
  summary = os.str();
}

void run_deform_check(Json& report, std::string& summary, const DeformArgs& a,
                      bool nu_set) {
  deform::TqRep rep = jsonio::tqrep_from_json(jsonio::load_file(a.rep_path));
  report["context"] = deform_context(rep);
  std::vector<std::string> problems = deform::validate(rep);
  deform::LiftCondition cond = build_condition(a, nu_set, rep);
  bool satisfied = problems.empty() && deform::check_condition(rep, cond);
  Json result;
  result["condition"] = cond.name();
  result["problems"] = problems;
  result["satisfied"] = satisfied;
  report["result"] = std::move(result);
  std::ostringstream os;
  os << "condition " << cond.name() << ": "
     << (satisfied ? "satisfied" : "not satisfied");
  if (!problems.empty()) os << " (" << problems.size() << " structural problem"
                            << (problems.size() == 1 ? "" : "s") << ")";
  summary = os.str();
}

void run_deform_lift(Json& report, std::string& summary, const DeformArgs& a,
                     bool nu_set) {
  deform::TqRep rep = load_rep(a.rep_path);
  report["context"] = deform_context(rep);
  deform::LiftCondition cond = build_condition(a, nu_set, rep);
  if (a.mode != "eps" && a.mode != "p")
    throw error("BadMode", "--mode must be eps or p");
  deform::TqRep cur = rep;
  Json steps = Json::array();
  std::optional<deform::ObstructionCertificate> cert;
  for (int i = 0; i < a.steps; ++i) {
    RingSpec next = a.mode == "eps" ? deform::eps_extension(cur.ring())
                                    : deform::p_extension(cur.ring());
    deform::LiftResult lr = deform::lift_step(cur, cond, next);
    Json js;
    js["ring"] = jsonio::ring_to_json(next);
    js["ok"] = lr.rep.has_value();
    js["kernel"] = lr.kernel.size();
    if (!lr.rep) {
      cert = lr.certificate;
      js["certificate"] = jsonio::certificate_to_json(*lr.certificate);
      js["verified"] = lr.certificate->verify();
      steps.push_back(std::move(js));
      break;
    }
    cur = *lr.rep;
    steps.push_back(std::move(js));
  }
  Json result;
  result["condition"] = cond.name();
  result["mode"] = a.mode;
  result["steps"] = std::move(steps);
  result["lifted"] = !cert.has_value();
  if (!cert) result["rep"] = jsonio::tqrep_to_json(cur);
  report["result"] = std::move(result);
  std::ostringstream os;
  if (cert) {
    os << "obstructed at degree " << cert->degree << " under " << cond.name();
  } else {
    os << "lifted to " << ring_name(cur.ring()) << " under " << cond.name();
  }
  summary = os.str();
}

void run_deform_tangent(Json& report, std::string& summary,
                        const DeformArgs& a, bool nu_set) {
  deform::TqRep rep = load_rep(a.rep_path);
  report["context"] = deform_context(rep);
  deform::LiftCondition cond = build_condition(a, nu_set, rep);
  deform::TangentReport tr = deform::tangent_report(rep, cond);
  Json result;
  result["condition"] = cond.name();
  result["tangent"] = tangent_to_json(tr);
  report["result"] = std::move(result);
  std::ostringstream os;
  os << cond.name() << " tangent dims: lifting " << tr.dim_lifting
     << ", deformation " << tr.dim_deformation << " (h0 " << tr.dim_h0
     << ", h0_ad0 " << tr.dim_h0_ad0 << ")";
  summary = os.str();
}

void run_deform_search(Json& report, std::string& summary, const DeformArgs& a,
                       bool nu_set) {
  deform::TqRep rep = load_rep(a.rep_path);
  report["context"] = deform_context(rep);
  deform::LiftCondition cond = build_condition(a, nu_set, rep);
  deform::SearchResult sr =
      deform::search_unliftable(rep, cond, a.depth, a.threads);
  Json result;
  result["condition"] = cond.name();
  result["depth"] = a.depth;
  result["candidates_tried"] = sr.classes_tried;
  result["exhausted"] = sr.exhausted;
  if (!sr.note.empty()) result["note"] = sr.note;
  result["found"] = sr.certificate.has_value();
  if (sr.certificate) {
    result["certificate"] = jsonio::certificate_to_json(*sr.certificate);
    result["verified"] = sr.certificate->verify();
  }
  if (sr.witness) result["witness"] = jsonio::tqrep_to_json(*sr.witness);
  report["result"] = std::move(result);
  std::ostringstream os;
  if (sr.certificate) {
    os << "found a degree-" << sr.certificate->degree
       << " obstruction under " << cond.name() << " after " << sr.classes_tried
       << " candidate" << (sr.classes_tried == 1 ? "" : "s");
  } else {
    os << "no obstruction under " << cond.name() << " (" << sr.classes_tried
       << " candidates" << (sr.exhausted ? ", exhausted" : "") << ")";
  }
  summary = os.str();
}

void run_deform_example(Json& report, std::string& summary) {
  RingSpec F7 = RingSpec::prime_field(7);
  Matrix J = Matrix::from_int(
      F7, {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}});
  deform::TqRep rep;
  rep.group = GroupSpec::with_gram(Family::GSp, J);
  rep.q = 29;
  rep.phi = Matrix::from_int(
      F7, {{1, -1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}});
  rep.nil = Matrix::from_int(
      F7, {{0, 0, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  std::vector<std::string> problems = deform::validate(rep);
  if (!problems.empty())
    throw error("InvalidRepresentation", problems.front());
  report["context"] = deform_context(rep);

  Json flags = Json::array();
  int admitting = 0, obstructed = 0;
  const std::vector<std::vector<int>> flag_types = {{}, {1}, {2}, {1, 2}};
  for (const std::vector<int>& flag : flag_types) {
    Json jf;
    jf["flag"] = flag;
    jf["richardson"] =
        jsonio::partition_to_json(deform::richardson_partition(rep.group, flag));
    deform::LiftCondition cond = deform::LiftCondition::parabolic_ramified(flag);
    bool admits = deform::check_condition(rep, cond);
    jf["admits"] = admits;
    if (admits) {
      ++admitting;
      deform::SearchResult sr = deform::search_unliftable(rep, cond, 3);
      jf["candidates_tried"] = sr.classes_tried;
      if (sr.certificate) {
        ++obstructed;
        jf["certificate"] = jsonio::certificate_to_json(*sr.certificate);
        jf["verified"] = sr.certificate->verify();
        if (sr.witness) jf["witness"] = jsonio::tqrep_to_json(*sr.witness);
      }
    }
    flags.push_back(std::move(jf));
  }

  OrbitRep orb = orbits::build_representative(Partition::parse("2+1+1"),
                                              Family::Sp, 4, F7);
  deform::LiftCondition mc = deform::LiftCondition::minimally_ramified(orb);
  Json mr;
  mr["condition"] = mc.name();
  mr["tangent"] = tangent_to_json(deform::tangent_report(rep, mc));
  Json chain = Json::array();
  deform::TqRep cur = rep;
  bool mr_ok = true;
  for (int i = 0; i < 3 && mr_ok; ++i) {
    RingSpec next = deform::eps_extension(cur.ring());
    deform::LiftResult lr = deform::lift_step(cur, mc, next);
    Json js;
    js["ring"] = jsonio::ring_to_json(next);
    js["ok"] = lr.rep.has_value();
    if (lr.rep) {
      cur = *lr.rep;
    } else {
      mr_ok = false;
      js["certificate"] = jsonio::certificate_to_json(*lr.certificate);
    }
    chain.push_back(std::move(js));
  }
  mr["chain"] = std::move(chain);
  mr["lifted"] = mr_ok;
  mr["final_ring"] = jsonio::ring_to_json(cur.ring());

  Json result;
  result["representation"] = jsonio::tqrep_to_json(rep);
  result["flags"] = std::move(flags);
  result["minimally_ramified"] = std::move(mr);
  report["result"] = std::move(result);
  std::ostringstream os;
  os << admitting << " of " << flag_types.size()
     << " flag types admit the representation; " << obstructed
     << " yield degree-2 obstruction certificates; minimally-ramified chain "
     << (mr_ok ? "lifted to " + ring_name(cur.ring()) : "obstructed");
  summary = os.str();
}

}  // namespace

RunReport dispatch(const std::vector<std::string>& args) {
  RunReport out;
  Json& report = out.report;
  report["command"] = join_args(args);

  CLI::App app{"exact nilpotent-orbit representatives, centralizers, and "
               "tame lifting diagnostics"};
  app.name("tq");
  app.require_subcommand(1);

  // partitions ------------------------------------------------------------
  CLI::App* partitions_cmd =
      app.add_subcommand("partitions", "partition combinatorics");
  partitions_cmd->require_subcommand(1);
  std::string pe_family = "gl";
  int pe_m = 0;
  CLI::App* pe = partitions_cmd->add_subcommand(
      "enumerate", "list the admissible partitions of m");
  pe->add_option("--family", pe_family, "gl, sp, o, so, gsp, go")->required();
  pe->add_option("--m", pe_m, "size")->required();
  pe->callback([&] { run_partitions_enumerate(report, out.summary, pe_family, pe_m); });

  std::string pd_sigma;
  CLI::App* pd = partitions_cmd->add_subcommand(
      "diagnostics", "compare direct weight dims against the closed forms");
  pd->add_option("--sigma", pd_sigma, "partition, e.g. 2+2")->required();
  pd->callback([&] { run_partitions_diagnostics(report, out.summary, pd_sigma); });

  // orbits ----------------------------------------------------------------
  CLI::App* orbits_cmd =
      app.add_subcommand("orbits", "integral nilpotent representatives");
  orbits_cmd->require_subcommand(1);
  std::string ob_family, ob_partition, ob_ring, ob_out;
  int ob_m = 0;
  CLI::App* ob = orbits_cmd->add_subcommand("build",
                                            "assemble a representative");
  ob->add_option("--family", ob_family, "gl, sp, o, so, gsp, go")->required();
  ob->add_option("--m", ob_m, "size")->required();
  ob->add_option("--partition", ob_partition, "e.g. 2+1+1")->required();
  ob->add_option("--ring", ob_ring, "p=7,a=2,n=1 (default rationals)");
  ob->add_option("--out", ob_out, "also write the representative here");
  ob->callback([&] {
    run_orbits_build(report, out.summary, ob_family, ob_m, ob_partition,
                     ob_ring, ob_out);
  });

  std::string oj_in, oj_ring;
  long long oj_p = 0;
  CLI::App* oj = orbits_cmd->add_subcommand("jordan", "jordan type of a matrix");
  oj->add_option("--in", oj_in, "matrix file {\"ring\", \"matrix\"}")->required();
  oj->add_option("--ring", oj_ring, "override the file ring");
  oj->add_option("--p", oj_p, "also compare against the mod-p type");
  oj->callback([&] {
    run_orbits_jordan(report, out.summary, oj_in, oj_ring, oj_p);
  });

  std::string on_in, on_ring;
  CLI::App* on = orbits_cmd->add_subcommand(
      "normalize", "change of basis to the standard pairing");
  on->add_option("--in", on_in, "representative file")->required();
  on->add_option("--ring", on_ring, "rebuild over this ring first");
  on->callback([&] { run_orbits_normalize(report, out.summary, on_in, on_ring); });

  // centralizer -------------------------------------------------------------
  std::string ce_rep, ce_ring;
  CLI::App* ce = app.add_subcommand(
      "centralizer", "structure, algebra and sections of a centralizer");
  ce->add_option("--rep", ce_rep, "representative file")->required();
  ce->add_option("--ring", ce_ring, "rebuild over this ring first");
  ce->callback([&] { run_centralizer(report, out.summary, ce_rep, ce_ring); });

  // explog ------------------------------------------------------------------
  CLI::App* explog_cmd =
      app.add_subcommand("explog", "truncated exponential and logarithm");
  explog_cmd->require_subcommand(1);
  std::string ee_in, ee_ring, el_in, el_ring;
  CLI::App* ee = explog_cmd->add_subcommand("exp", "exp of a nilpotent matrix");
  ee->add_option("--in", ee_in, "matrix file")->required();
  ee->add_option("--ring", ee_ring, "override the file ring");
  ee->callback([&] { run_explog(report, out.summary, true, ee_in, ee_ring); });
  CLI::App* el = explog_cmd->add_subcommand("log", "log of a unipotent matrix");
  el->add_option("--in", el_in, "matrix file")->required();
  el->add_option("--ring", el_ring, "override the file ring");
  el->callback([&] { run_explog(report, out.summary, false, el_in, el_ring); });

  // deform ------------------------------------------------------------------
  CLI::App* deform_cmd =
      app.add_subcommand("deform", "lifting conditions and obstructions");
  deform_cmd->require_subcommand(1);
  DeformArgs da_check, da_lift, da_tangent, da_search;
  auto add_common = [](CLI::App* sub, DeformArgs& a, bool with_cond = true) {
    sub->add_option("--rep", a.rep_path, "representation file")->required();
    if (with_cond)
      sub->add_option("--cond", a.cond,
                      "unrestricted, fixed-similitude, minimally-ramified, "
                      "parabolic-ramified")
          ->required();
    sub->add_option("--orbit", a.orbit_path,
                    "orbit file for minimally-ramified");
    sub->add_option("--nu", a.nu, "similitude target");
    sub->add_option("--flag", a.flag_text,
                    "isotropic dimension jumps for parabolic-ramified, "
                    "e.g. 1,2 (empty = trivial flag)");
  };
  CLI::App* dc = deform_cmd->add_subcommand(
      "check", "validate a representation against a condition");
  add_common(dc, da_check);
  dc->callback([&] {
    run_deform_check(report, out.summary, da_check, dc->count("--nu") > 0);
  });
  CLI::App* dl = deform_cmd->add_subcommand("lift", "chain of small lifts");
  add_common(dl, da_lift);
  dl->add_option("--steps", da_lift.steps, "number of extension steps");
  dl->add_option("--mode", da_lift.mode, "eps (default) or p");
  dl->callback([&] {
    run_deform_lift(report, out.summary, da_lift, dl->count("--nu") > 0);
  });
  CLI::App* dt = deform_cmd->add_subcommand(
      "tangent", "first-order dimension counts");
  add_common(dt, da_tangent);
  dt->callback([&] {
    run_deform_tangent(report, out.summary, da_tangent, dt->count("--nu") > 0);
  });
  CLI::App* ds = deform_cmd->add_subcommand(
      "search", "look for a first-order lift that obstructs later");
  add_common(ds, da_search);
  ds->add_option("--depth", da_search.depth, "chase lifts up to eps^depth");
  ds->add_option("--threads", da_search.threads, "worker threads");
  ds->callback([&] {
    run_deform_search(report, out.summary, da_search, ds->count("--nu") > 0);
  });
  CLI::App* dp = deform_cmd->add_subcommand(
      "paper-example",
      "run the bundled rank-2 similitude example end to end");
  dp->callback([&] { run_deform_example(report, out.summary); });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out.exit_code = 0;
    out.summary = app.help();
    report["help"] = true;
    return out;
  } catch (const CLI::ParseError& e) {
    out.exit_code = 1;
    Json err;
    err["code"] = "Usage";
    err["what"] = e.what();
    report["error"] = std::move(err);
    out.summary = std::string("usage error: ") + e.what();
    return out;
  } catch (const error& e) {
    out.exit_code = 2;
    Json err;
    err["code"] = e.code();
    err["what"] = e.what();
    report["error"] = std::move(err);
    out.summary = std::string("error: ") + e.what();
    return out;
  }
  if (report.contains("result"))
    report["checksum"] = jsonio::checksum(report["result"]);
  return out;
}

}  // namespace cli
}  // namespace tq
