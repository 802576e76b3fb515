// geodec: command-line front end for lattice decompositions, DoF checks and
// mesh smoothness verification.
//
// Exit codes: 0 all checks pass, 1 a check failed or parameters are
// inadmissible, 2 usage error.

#include "geodec/geodec.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using geodec::ElementSpec;
using geodec::Json;

struct Params {
  std::string family = "lagrange";
  int n = 2;
  int k = 1;
  int m = 0;
  std::vector<int> r;
  std::string format = "text";
  std::string output;
  unsigned jobs = 1;
};

void add_element_options(CLI::App* cmd, Params& p) {
  cmd->add_option("--family", p.family, "lagrange | hermite | smooth | smooth2d")
      ->check(CLI::IsMember({"lagrange", "hermite", "smooth", "smooth2d"}));
  cmd->add_option("-n", p.n, "simplex dimension");
  cmd->add_option("-k", p.k, "polynomial degree")->required();
  cmd->add_option("-m", p.m, "Hermite vertex order");
  cmd->add_option("-r", p.r, "smoothness orders r_0,...,r_n")->delimiter(',');
  cmd->add_option("-o,--output", p.output, "output file (relative to $GEODEC_OUTPUT_DIR when set)");
}

ElementSpec make_spec(const Params& p) {
  if (p.family == "lagrange") return ElementSpec::lagrange(p.n, p.k);
  if (p.family == "hermite") return ElementSpec::hermite(p.n, p.k, p.m);
  if (p.r.empty()) throw CLI::ValidationError("-r", "smooth families need -r r_0,...,r_n");
  if (p.family == "smooth2d") {
    if (p.r.size() != 3) throw CLI::ValidationError("-r", "smooth2d needs -r r_0,m,0");
    if (p.r[2] != 0) throw geodec::ConstraintViolation({"r_2 = 0"});
    return ElementSpec::smooth2d(p.r[0], p.r[1], p.k);
  }
  if (static_cast<int>(p.r.size()) != p.n + 1)
    throw geodec::ConstraintViolation({"smoothness vector must have n + 1 = " + std::to_string(p.n + 1) + " entries"});
  return ElementSpec::smooth(p.r, p.k);
}

std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return &std::cout;
  std::filesystem::path target(path);
  if (target.is_relative())
    if (const char* dir = std::getenv("GEODEC_OUTPUT_DIR"); dir && *dir) target = std::filesystem::path(dir) / target;
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  file.open(target);
  if (!file) throw std::runtime_error("cannot write " + target.string());
  return &file;
}

void print_decomposition_text(std::ostream& out, const geodec::LatticeDecomposition& d) {
  out << to_string(d.kind()) << " decomposition of T^" << d.n() << "_" << d.k() << "\n";
  for (const auto& p : d.pieces()) {
    out << "  " << p.face.str() << " [" << p.nodes.size() << "]";
    for (const auto& a : p.nodes) out << " " << a.str();
    out << "\n";
  }
  out << "total " << d.total_size() << "\n";
}

int cmd_decompose(const Params& p) {
  auto spec = make_spec(p);
  auto d = spec.decomposition();
  std::ofstream file;
  std::ostream& out = *open_output(p.output, file);
  if (p.format == "json")
    out << geodec::decomposition_to_json(d).dump(2) << "\n";
  else if (p.format == "svg")
    out << geodec::decomposition_to_svg(d);
  else
    print_decomposition_text(out, d);
  return 0;
}

geodec::Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  geodec::Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

int cmd_verify(const Params& p, const std::string& mesh_path, const std::string& frame, int vectors,
               std::uint64_t seed) {
  auto spec = make_spec(p);
  Json report;
  report["element"] = spec.str();
  bool pass = true;

  auto part = geodec::verify_partition(spec.decomposition());
  report["partition"] = geodec::partition_to_json(part);
  pass &= part.ok();

  const auto policy = frame == "canonical" ? geodec::FramePolicy::Canonical : geodec::FramePolicy::Dual;
  auto g = geodec::SimplexGeometry<geodec::Rational>::reference(spec.n);
  auto set = geodec::build_dofs(spec, g, policy);
  auto m = geodec::dof_matrix(set, p.jobs);
  geodec::UnisolvenceReport uni{false, geodec::determinant(m.values), set.size(), set.size()};
  uni.invertible = uni.determinant != 0 && set.size() == static_cast<std::size_t>(spec.dimension());
  report["unisolvence"] = geodec::unisolvence_to_json(uni);
  pass &= uni.invertible;

  auto bt = geodec::check_block_triangular(set, p.jobs);
  report["block_triangular"] = geodec::block_report_to_json(bt);
  pass &= bt.holds;

  if (spec.n == 2 && spec.smooth()) {
    auto mismatch = geodec::smooth2d_index_sets_match(spec);
    report["index_sets_match"] = !mismatch;
    if (mismatch) report["index_set_mismatch"] = *mismatch;
    pass &= !mismatch;
  }

  if (!mesh_path.empty()) {
    auto mesh = geodec::load_mesh(mesh_path);
    auto map = geodec::global_dof_map(mesh, spec);
    std::mt19937_64 rng(seed);
    std::vector<std::vector<geodec::Rational>> vs(static_cast<std::size_t>(vectors));
    for (auto& v : vs) {
      v.resize(map.size());
      for (auto& x : v) x = random_rational(rng);
    }
    auto polys = geodec::reconstruct(map, vs, p.jobs);
    auto cont = geodec::continuity_check(mesh, map, polys);
    report["mesh"] = {{"face_counts", mesh.face_counts()}, {"global_dimension", map.size()}};
    report["continuity"] = geodec::continuity_to_json(cont);
    pass &= cont.ok();
  }
  report["pass"] = pass;

  std::ofstream file;
  std::ostream& out = *open_output(p.output, file);
  if (p.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    out << report["element"].get<std::string>() << "\n";
    out << "  partition          " << (part.ok() ? "ok" : "FAIL") << "\n";
    out << "  unisolvence        " << (uni.invertible ? "ok" : "FAIL") << " (" << set.size() << " DoFs)\n";
    out << "  block triangular   " << (bt.holds ? "ok" : "FAIL") << "\n";
    if (report.contains("index_sets_match"))
      out << "  index sets         " << (report["index_sets_match"].get<bool>() ? "ok" : "FAIL") << "\n";
    if (report.contains("continuity")) {
      bool ok = true;
      for (const auto& e : report["continuity"]) ok &= !e["required"].get<bool>() || e["max_jump"] == "0";
      out << "  continuity         " << (ok ? "ok" : "FAIL") << " (global dim " << report["mesh"]["global_dimension"]
          << ")\n";
    }
    out << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) std::cerr << report.dump(2) << "\n";
  }
  return pass ? 0 : 1;
}

int cmd_dims(const Params& p, const std::vector<std::int64_t>& counts, const std::string& mesh_path) {
  auto spec = make_spec(p);
  std::vector<std::int64_t> c = counts;
  if (!mesh_path.empty()) c = geodec::load_mesh(mesh_path).face_counts();
  auto t = geodec::dimension_table(spec, c);
  std::ofstream file;
  std::ostream& out = *open_output(p.output, file);
  if (p.format == "json") {
    out << geodec::dimension_table_to_json(t).dump(2) << "\n";
  } else {
    out << spec.str() << "\n";
    out << "level  faces  per-face";
    for (const auto& f : t.formulas) out << "  " << f.name;
    out << "\n";
    for (std::size_t l = 0; l < t.per_face.size(); ++l) {
      out << l << "      " << t.face_counts[l] << "      " << t.per_face[l];
      for (const auto& f : t.formulas) out << "  " << geodec::to_string(f.per_face[l]);
      out << "\n";
    }
    out << "total  " << t.total;
    for (const auto& f : t.formulas) out << "  " << geodec::to_string(f.total);
    out << "\n" << (t.agree() ? "formulas agree" : "formula MISMATCH") << "\n";
  }
  return t.agree() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric decompositions of simplicial lattices and finite element DoFs"};
  app.require_subcommand(1);
  Params p;
  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "worker threads for matrix assembly")->check(CLI::PositiveNumber);

  auto* dec = app.add_subcommand("decompose", "print a lattice decomposition");
  add_element_options(dec, p);
  dec->add_option("--format", p.format, "text | json | svg")->check(CLI::IsMember({"text", "json", "svg"}));

  std::string mesh_path, frame = "dual";
  int vectors = 5;
  std::uint64_t seed = 1;
  auto* ver = app.add_subcommand("verify", "run partition, unisolvence, block and continuity checks");
  add_element_options(ver, p);
  ver->add_option("--format", p.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  ver->add_option("--mesh", mesh_path, "mesh JSON for the continuity check")->check(CLI::ExistingFile);
  ver->add_option("--frame", frame, "normal frame for the element checks: dual | canonical")
      ->check(CLI::IsMember({"dual", "canonical"}));
  ver->add_option("--vectors", vectors, "random coefficient vectors for the continuity check")
      ->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "random seed");

  std::vector<std::int64_t> counts;
  auto* dims = app.add_subcommand("dims", "dimension counts: enumeration against closed forms");
  add_element_options(dims, p);
  dims->add_option("--format", p.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  dims->add_option("--counts", counts, "|Delta_0|,...,|Delta_n| (default: one simplex)")->delimiter(',');
  dims->add_option("--mesh", mesh_path, "take the face counts from a mesh")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  p.jobs = jobs;
  try {
    if (*dec) return cmd_decompose(p);
    if (*ver) return cmd_verify(p, mesh_path, frame, vectors, seed);
    if (*dims) return cmd_dims(p, counts, mesh_path);
  } catch (const geodec::ConstraintViolation& e) {
    Json j{{"error", "constraint_violation"}, {"violations", e.violations()}};
    std::cout << j.dump(2) << "\n";
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    Json j{{"error", "check_failed"}, {"message", e.what()}};
    std::cout << j.dump(2) << "\n";
    return 1;
  }
  return 2;
}
