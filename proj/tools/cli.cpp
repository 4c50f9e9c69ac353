#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <json.hpp>
#include <optional>
#include <regex>

#include "dgc/model_file.hpp"
#include "dgc/spectral_sequence.hpp"

namespace dgc::cli {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rows go out as one JSON record each, or as aligned text tables.
class Output {
 public:
  Output(std::ostream& os, bool jsonl) : os_(os), jsonl_(jsonl) {}
  ~Output() { flush(); }

  void table(std::string title, std::vector<std::string> header) {
    flush();
    title_ = std::move(title);
    rows_ = {std::move(header)};
  }
  void row(const Json& record, std::vector<std::string> cells) {
    if (jsonl_)
      os_ << record.dump() << "\n";
    else
      rows_.push_back(std::move(cells));
  }

 private:
  void flush() {
    if (jsonl_ || rows_.empty()) return;
    if (!title_.empty()) os_ << title_ << "\n";
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (width.size() <= i) width.push_back(0);
        width[i] = std::max(width[i], r[i].size());
      }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      os_ << line << "\n";
    }
    rows_.clear();
  }

  std::ostream& os_;
  bool jsonl_;
  std::string title_;
  std::vector<std::vector<std::string>> rows_;
};

Json integer_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

Json group_json(const HomologyGroup& g) {
  Json torsion = Json::array();
  for (const auto& t : g.torsion) torsion.push_back(integer_json(t));
  return Json{{"group", g.to_string()}, {"rank", g.free_rank}, {"torsion", torsion}};
}

HomologyGroup group_of_orders(const std::vector<Integer>& orders) {
  HomologyGroup g;
  for (const auto& o : orders)
    if (o == 0)
      ++g.free_rank;
    else
      g.torsion.push_back(o);
  return g;
}

Json matrix_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(integer_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

std::string matrix_text(const IntMatrix& m) { return matrix_json(m).dump(); }

std::pair<int, int> parse_degrees(const std::string& text) {
  static const std::regex pattern(R"((-?\d+)\.\.(-?\d+))");
  std::smatch match;
  if (!std::regex_match(text, match, pattern))
    throw UsageError("degrees must look like a..b, got '" + text + "'");
  const int lo = std::stoi(match[1]);
  const int hi = std::stoi(match[2]);
  if (lo > hi) throw UsageError("empty degree range '" + text + "'");
  return {lo, hi};
}

template <class T>
const T& lookup(const ModelFile& file, const std::string& name, const char* what) {
  if (const T* t = file.find<T>(name)) return *t;
  throw UsageError(std::string("no ") + what + " named '" + name + "' in the file");
}

Json violation_json(const Violation& v) {
  return Json{{"axiom", v.axiom}, {"witness", v.witness}, {"residual", v.residual}};
}

std::string violation_text(const Violation& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

ParseOptions parse_options() {
  ParseOptions options;
  if (const char* env = std::getenv("DGC_TRUNCATION")) {
    static const std::regex digits(R"(\d{1,4})");
    if (!std::regex_match(env, digits))
      throw UsageError(std::string("DGC_TRUNCATION must be a nonnegative integer, got '") +
                       env + "'");
    options.default_truncation = std::stoi(env);
  }
  return options;
}

struct Settings {
  std::string file;
  std::string format = "table";
  std::string complex;
  std::string degrees;
  std::string name;
  std::string map_a;
  std::string map_b;
  std::string mode = "z";
  std::string expression;
  std::string level;
  std::string model;
  int page = 2;
  int degree = 0;
  bool check = false;
  bool induced = false;
  std::string apply;
};

int validate(const ModelFile& file, Output& out) {
  out.table("", {"section", "name", "status", "detail"});
  bool ok = true;
  auto report = [&](const char* kind, const std::string& name, const ValidationReport& r) {
    Json record{{"command", "validate"}, {"section", kind}, {"name", name}, {"ok", r.ok()}};
    Json violations = Json::array();
    for (const auto& v : r.violations) violations.push_back(violation_json(v));
    record["violations"] = violations;
    if (r.ok()) {
      out.row(record, {kind, name, "ok", ""});
      return;
    }
    ok = false;
    for (std::size_t i = 0; i < r.violations.size(); ++i)
      out.row(i == 0 ? record : Json(),
              {i ? "" : kind, i ? "" : name, i ? "" : "FAIL", violation_text(r.violations[i])});
  };
  // jsonl gets one record per section; only the first row of a failing
  // section carries it.
  for (const auto& s : file.sections())
    std::visit(
        [&](const auto& sec) {
          using T = std::decay_t<decltype(sec)>;
          if constexpr (std::is_same_v<T, DgaSection>)
            report("dga", sec.name, validate_dga(*sec.algebra));
          else if constexpr (std::is_same_v<T, LocalSystemSection>)
            report("local_system", sec.name, validate_local_system(sec.system));
          else if constexpr (std::is_same_v<T, ModuleSection>)
            report("module", sec.name, validate_module(*sec.module));
          else if constexpr (std::is_same_v<T, ComplexSection>)
            report("complex", sec.name, validate_cocycle(*sec.complex));
          else if constexpr (std::is_same_v<T, MapSection>)
            report("map", sec.name, validate_continuation(*sec.map));
          else
            report("homotopy", sec.name, validate_homotopy(*sec.homotopy));
        },
        s);
  return ok ? 0 : 1;
}

int homology_command(const ModelFile& file, const Settings& s, Output& out) {
  const auto& c = lookup<ComplexSection>(file, s.complex, "complex");
  auto [lo, hi] = parse_degrees(s.degrees);
  auto groups = homology(*c.complex, lo, hi);
  out.table("", {"degree", "homology"});
  for (int k = lo; k <= hi; ++k) {
    const HomologyGroup& g = groups[static_cast<std::size_t>(k - lo)];
    Json record{{"command", "homology"}, {"complex", c.name}, {"degree", k}};
    record.update(group_json(g));
    out.row(record, {std::to_string(k), g.to_string()});
  }
  return 0;
}

int ss_command(const ModelFile& file, const Settings& s, Output& out) {
  const auto& c = lookup<ComplexSection>(file, s.complex, "complex");
  const TwistedComplex& x = *c.complex;
  if (s.page < 1) throw UsageError("--page must be at least 1");
  if (x.generators().empty()) throw UsageError("complex '" + c.name + "' has no generators");
  int lo = x.min_generator_degree();
  int hi = x.max_generator_degree() + 1;
  if (!s.degrees.empty()) std::tie(lo, hi) = parse_degrees(s.degrees);
  const SpectralPage page = pages(x, s.page, lo, hi).back();
  const std::string r = std::to_string(s.page);
  out.table("E" + r + " on total degrees " + std::to_string(lo) + ".." + std::to_string(hi),
            {"p", "q", "group"});
  for (const auto& [b, g] : page.groups) {
    if (g.group().is_trivial()) continue;
    Json record{{"command", "ss"}, {"complex", c.name}, {"page", s.page},
                {"window", {lo, hi}}, {"p", b.p}, {"q", b.q}};
    record.update(group_json(g.group()));
    out.row(record, {std::to_string(b.p), std::to_string(b.q), g.group().to_string()});
  }
  out.table("d" + r, {"from", "to", "matrix", "isomorphism"});
  for (const auto& [b, d] : page.differentials) {
    if (d.matrix.is_zero()) continue;
    const Bidegree to{b.p - s.page, b.q + s.page - 1};
    const bool iso = is_isomorphism(d);
    Json record{{"command", "ss"},          {"complex", c.name},
                {"page", s.page},           {"window", {lo, hi}},
                {"from", {b.p, b.q}},       {"to", {to.p, to.q}},
                {"matrix", matrix_json(d.matrix)}, {"isomorphism", iso}};
    auto pair = [](const Bidegree& x) {
      return "(" + std::to_string(x.p) + "," + std::to_string(x.q) + ")";
    };
    out.row(record, {pair(b), pair(to), matrix_text(d.matrix), iso ? "yes" : "no"});
  }
  return 0;
}

int map_command(const ModelFile& file, const Settings& s, Output& out) {
  const auto& m = lookup<MapSection>(file, s.name, "map");
  const ContinuationCocycle& nu = *m.map;
  const int chosen = int(s.check) + int(!s.apply.empty()) + int(s.induced);
  if (chosen != 1) throw UsageError("map needs exactly one of --check, --apply, --induced");
  if (s.check) {
    ValidationReport r = validate_continuation(nu);
    if (r.ok()) {
      auto [lo, hi] = default_window(*nu.source());
      try {
        check_chain_map(nu, lo, hi);
      } catch (const ChainMapViolation& e) {
        r.add("chain map", {}, e.what());
      }
    }
    out.table("", {"map", "status", "detail"});
    Json violations = Json::array();
    for (const auto& v : r.violations) violations.push_back(violation_json(v));
    Json record{{"command", "map"}, {"name", m.name}, {"ok", r.ok()}, {"violations", violations}};
    if (r.ok()) out.row(record, {m.name, "ok", ""});
    for (std::size_t i = 0; i < r.violations.size(); ++i)
      out.row(i == 0 ? record : Json(),
              {i ? "" : m.name, i ? "" : "FAIL", violation_text(r.violations[i])});
    return r.ok() ? 0 : 1;
  }
  if (!s.apply.empty()) {
    Chain z = nu.source()->parse_chain(s.apply);
    Chain image = apply(nu, z);
    const std::string text = image.is_zero() ? "0" : nu.target()->format(image);
    out.table("", {"map", "chain", "image"});
    out.row(Json{{"command", "map"}, {"name", m.name}, {"chain", nu.source()->format(z)},
                 {"image", text}},
            {m.name, nu.source()->format(z), text});
    return 0;
  }
  if (s.degrees.empty()) throw UsageError("--induced needs --degrees");
  auto [lo, hi] = parse_degrees(s.degrees);
  auto maps = induced_on_homology(nu, lo, hi);
  out.table("", {"degree", "source", "target", "matrix"});
  for (int k = lo; k <= hi; ++k) {
    const GroupMap& g = maps[static_cast<std::size_t>(k - lo)];
    const HomologyGroup src = group_of_orders(g.source_orders);
    const HomologyGroup dst = group_of_orders(g.target_orders);
    out.row(Json{{"command", "map"}, {"name", m.name}, {"degree", k},
                 {"source", src.to_string()}, {"target", dst.to_string()},
                 {"matrix", matrix_json(g.matrix)}},
            {std::to_string(k), src.to_string(), dst.to_string(), matrix_text(g.matrix)});
  }
  return 0;
}

int homotopy_command(const ModelFile& file, const Settings& s, Output& out) {
  const auto& h = lookup<HomotopySection>(file, s.name, "homotopy");
  if (!s.check) throw UsageError("homotopy needs --check");
  ValidationReport r = validate_homotopy(*h.homotopy);
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(violation_json(v));
  out.table("", {"homotopy", "status", "detail"});
  Json record{{"command", "homotopy"}, {"name", h.name}, {"ok", r.ok()}, {"violations", violations}};
  if (r.ok()) out.row(record, {h.name, "ok", ""});
  for (std::size_t i = 0; i < r.violations.size(); ++i)
    out.row(i == 0 ? record : Json(),
            {i ? "" : h.name, i ? "" : "FAIL", violation_text(r.violations[i])});
  return r.ok() ? 0 : 1;
}

int criterion_command(const ModelFile& file, const Settings& s, Output& out) {
  const auto& a = lookup<MapSection>(file, s.map_a, "map");
  const auto& b = lookup<MapSection>(file, s.map_b, "map");
  if (a.from != b.from)
    throw UsageError("maps '" + a.name + "' and '" + b.name + "' start at different complexes");
  CriterionMode mode;
  if (s.mode == "z")
    mode = CriterionMode::saturated;
  else if (s.mode == "q")
    mode = CriterionMode::rational;
  else if (s.mode == "raw")
    mode = CriterionMode::raw;
  else
    throw UsageError("--mode must be z, q or raw");
  GroupMap fa = induced_on_homology(*a.map, s.degree, s.degree).front();
  GroupMap fb = induced_on_homology(*b.map, s.degree, s.degree).front();
  const bool result = kernel_criterion(fa, fb, mode);
  out.table("", {"a", "b", "degree", "mode", "ker a not in ker b"});
  out.row(Json{{"command", "criterion"}, {"a", a.name}, {"b", b.name}, {"degree", s.degree},
               {"mode", s.mode}, {"result", result}},
          {a.name, b.name, std::to_string(s.degree), s.mode, result ? "true" : "false"});
  return 0;
}

int spectral_invariant_command(const ModelFile& file, const Settings& s, Output& out) {
  const auto& c = lookup<ComplexSection>(file, s.complex, "complex");
  GroundRing ring;
  if (s.mode == "z")
    ring = GroundRing::integers;
  else if (s.mode == "q")
    ring = GroundRing::rationals;
  else
    throw UsageError("--mode must be z or q");
  auto level = parse_rational(s.level);
  if (!level) throw UsageError("--level must be an integer or p/q, got '" + s.level + "'");
  Chain z = c.complex->parse_chain(s.expression);
  ExtendedRational value = spectral_number(*c.complex, z, *level, ring);
  out.table("", {"complex", "class", "level", "mode", "spectral number"});
  out.row(Json{{"command", "spectral-invariant"}, {"complex", c.name},
               {"class", c.complex->format(z)}, {"level", rational_to_string(*level)},
               {"mode", s.mode}, {"value", value.to_string()}},
          {c.name, c.complex->format(z), rational_to_string(*level), s.mode,
           value.to_string()});
  return 0;
}

const std::vector<std::pair<std::string, std::string>>& export_names() {
  static const std::vector<std::pair<std::string, std::string>> names{
      {"circle", "S1"},   {"circle_twisted", "S1_TWISTED"},
      {"sphere2", "S2"},  {"sphere3", "S3"},
      {"torus", "T2"},    {"rp2", "RP2"},
      {"rp3", "RP3"},     {"rp3_trivial", "RP3_TRIVIAL"},
      {"rp4_sign", "RP4_SIGN"}, {"hopf", "HOPF"}};
  return names;
}

int export_command(const Settings& s, std::ostream& os) {
  for (const auto& m : builtin_models()) {
    if (m.id != s.model) continue;
    std::string name = s.name;
    if (name.empty())
      for (const auto& [id, n] : export_names())
        if (id == m.id) name = n;
    os << export_model_file(model_file_for(m, name));
    return 0;
  }
  std::string known;
  for (const auto& [id, n] : export_names()) known += (known.empty() ? "" : ", ") + id;
  throw UsageError("unknown model '" + s.model + "' (known: " + known + ")");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Twisted complexes over DG coefficient algebras", "dgc"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", s.file, "model file (.dgc)")->required();
    sub->add_option("--format", s.format, "table or jsonl")
        ->check(CLI::IsMember({"table", "jsonl"}));
  };
  CLI::App* validate_cmd = app.add_subcommand("validate", "validate every section");
  add_common(validate_cmd);

  CLI::App* homology_cmd = app.add_subcommand("homology", "homology of a complex");
  add_common(homology_cmd);
  homology_cmd->add_option("--complex", s.complex)->required();
  homology_cmd->add_option("--degrees", s.degrees, "a..b")->required();

  CLI::App* ss_cmd = app.add_subcommand("ss", "a page of the spectral sequence");
  add_common(ss_cmd);
  ss_cmd->add_option("--complex", s.complex)->required();
  ss_cmd->add_option("--page", s.page)->required();
  ss_cmd->add_option("--degrees", s.degrees,
                     "total degrees a..b (default: generator degrees and one above)");

  CLI::App* map_cmd = app.add_subcommand("map", "check, apply or induce a map");
  add_common(map_cmd);
  map_cmd->add_option("--name", s.name)->required();
  map_cmd->add_flag("--check", s.check);
  map_cmd->add_option("--apply", s.apply, "chain expression such as 't|M - 1|m'");
  map_cmd->add_flag("--induced", s.induced);
  map_cmd->add_option("--degrees", s.degrees, "a..b for --induced");

  CLI::App* homotopy_cmd = app.add_subcommand("homotopy", "check a homotopy");
  add_common(homotopy_cmd);
  homotopy_cmd->add_option("--name", s.name)->required();
  homotopy_cmd->add_flag("--check", s.check);

  CLI::App* criterion_cmd = app.add_subcommand("criterion", "is ker A not inside ker B");
  add_common(criterion_cmd);
  criterion_cmd->add_option("--a", s.map_a)->required();
  criterion_cmd->add_option("--b", s.map_b)->required();
  criterion_cmd->add_option("--degree", s.degree)->required();
  criterion_cmd->add_option("--mode", s.mode, "z (saturated), q or raw");

  CLI::App* invariant_cmd =
      app.add_subcommand("spectral-invariant", "spectral number of a class");
  add_common(invariant_cmd);
  invariant_cmd->add_option("--complex", s.complex)->required();
  invariant_cmd->add_option("--class", s.expression)->required();
  invariant_cmd->add_option("--level", s.level)->required();
  invariant_cmd->add_option("--mode", s.mode, "z or q");

  CLI::App* export_cmd = app.add_subcommand("export", "print a built-in model as a file");
  export_cmd->add_option("--model", s.model)->required();
  export_cmd->add_option("--name", s.name, "complex name");

  std::vector<std::string> argv_storage{"dgc"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dgc: " << e.what() << "\n";
    return 2;
  }

  try {
    if (export_cmd->parsed()) return export_command(s, out);
    const ModelFile file = read_model_file(s.file, parse_options());
    Output output(out, s.format == "jsonl");
    if (validate_cmd->parsed()) return validate(file, output);
    if (homology_cmd->parsed()) return homology_command(file, s, output);
    if (ss_cmd->parsed()) return ss_command(file, s, output);
    if (map_cmd->parsed()) return map_command(file, s, output);
    if (homotopy_cmd->parsed()) return homotopy_command(file, s, output);
    if (criterion_cmd->parsed()) return criterion_command(file, s, output);
    return spectral_invariant_command(file, s, output);
  } catch (const UsageError& e) {
    err << "dgc: " << e.what() << "\n";
    return 2;
  } catch (const ModelFileError& e) {
    err << s.file << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "dgc: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dgc::cli
