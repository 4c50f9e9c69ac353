#include "dgc/model_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "expression.hpp"

namespace dgc {

ModelFileError::ModelFileError(const std::string& message, std::size_t line,
                               std::size_t column)
    : Error("line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

bool ModelFile::add(Section s) {
  const std::string name = std::visit([](const auto& x) { return x.name; }, s);
  if (index_.count(name)) return false;
  index_.emplace(name, sections_.size());
  sections_.push_back(std::move(s));
  return true;
}

namespace {

// A piece of the file with the position of its first character.
struct Located {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;

  Located sub(std::size_t offset, std::size_t length = std::string::npos) const {
    return {text.substr(offset, length), line, column + offset};
  }
};

[[noreturn]] void syntax(const Located& at, const std::string& message) {
  throw SyntaxError(message, at.line, at.column);
}

Located trim(const Located& v) {
  std::size_t b = 0;
  std::size_t e = v.text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(v.text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(v.text[e - 1]))) --e;
  return v.sub(b, e - b);
}

std::vector<Located> split(const Located& v, char sep) {
  std::vector<Located> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= v.text.size(); ++i)
    if (i == v.text.size() || v.text[i] == sep) {
      Located item = trim(v.sub(start, i - start));
      if (item.text.empty()) syntax(item, "empty list item");
      out.push_back(std::move(item));
      start = i + 1;
    }
  return out;
}

std::pair<Located, Located> split_once(const Located& v, std::string_view sep) {
  const std::size_t i = v.text.find(sep);
  if (i == std::string::npos)
    syntax(v, "expected '" + std::string(sep) + "' in '" + v.text + "'");
  Located left = trim(v.sub(0, i));
  Located right = trim(v.sub(i + sep.size()));
  if (left.text.empty()) syntax(left, "missing item before '" + std::string(sep) + "'");
  if (right.text.empty()) syntax(right, "missing item after '" + std::string(sep) + "'");
  return {left, right};
}

void require_identifier(const Located& v) {
  if (!detail::is_identifier(v.text)) syntax(v, "invalid name '" + v.text + "'");
}

int parse_int(const Located& v) {
  std::size_t i = v.text[0] == '-' ? 1 : 0;
  if (i == v.text.size()) syntax(v, "expected an integer");
  for (std::size_t j = i; j < v.text.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(v.text[j])))
      syntax(v.sub(j), "expected an integer, found '" + v.text + "'");
  if (v.text.size() > 9) syntax(v, "integer out of range");
  return std::stoi(v.text);
}

Rational parse_rational(const Located& v) {
  const std::size_t slash = v.text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(v));
  Located num = v.sub(0, slash);
  Located den = v.sub(slash + 1);
  if (den.text.empty()) syntax(den, "malformed rational '" + v.text + "'");
  if (num.text.empty()) syntax(num, "malformed rational '" + v.text + "'");
  for (std::size_t j = 0; j < den.text.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(den.text[j])))
      syntax(den.sub(j), "malformed rational '" + v.text + "'");
  const Integer d(den.text);
  if (d == 0) syntax(den, "zero denominator");
  Integer n;
  if (n.set_str(num.text, 10) != 0) syntax(num, "malformed rational '" + v.text + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

// Runs f, turning library errors into located syntax errors.
template <class F>
auto located(const Located& at, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ModelFileError&) {
    throw;
  } catch (const ExpressionError& e) {
    throw SyntaxError(e.what(), at.line, at.column + e.position());
  } catch (const Error& e) {
    throw SyntaxError(e.what(), at.line, at.column);
  }
}

struct RawSection {
  Located header;
  std::string kind;
  std::vector<std::pair<Located, Located>> entries;  // key, value
};

std::vector<RawSection> scan(std::string_view text) {
  std::vector<RawSection> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    Located line{std::string(text.substr(start, end - start)), line_no, 1};
    if (!line.text.empty() && line.text.back() == '\r') line.text.pop_back();
    start = end + 1;
    Located t = trim(line);
    if (t.text.empty() || t.text[0] == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (t.text[0] == '[') {
      if (t.text.back() != ']') syntax(t, "unterminated section header");
      RawSection s;
      s.header = t;
      s.kind = trim(t.sub(1, t.text.size() - 2)).text;
      out.push_back(std::move(s));
    } else {
      if (out.empty()) syntax(t, "entry outside of a section");
      auto [key, value] = split_once(t, "=");
      for (const auto& [k, v] : out.back().entries)
        if (k.text == key.text) syntax(key, "duplicate key '" + key.text + "'");
      out.back().entries.emplace_back(std::move(key), std::move(value));
    }
    if (end == text.size()) break;
  }
  return out;
}

class SectionReader {
 public:
  SectionReader(const RawSection& raw, std::set<std::string> allowed)
      : raw_(raw) {
    for (const auto& [k, v] : raw.entries)
      if (!allowed.count(k.text))
        syntax(k, "unknown key '" + k.text + "' in [" + raw.kind + "]");
  }

  const Located* get(std::string_view key) const {
    for (const auto& [k, v] : raw_.entries)
      if (k.text == key) return &v;
    return nullptr;
  }
  const Located& need(std::string_view key) const {
    if (const Located* v = get(key)) return *v;
    syntax(raw_.header, "[" + raw_.kind + "] needs '" + std::string(key) + "'");
  }
  const Located& header() const { return raw_.header; }

 private:
  const RawSection& raw_;
};

template <class T>
const T& resolve(const ModelFile& file, const Located& name, const char* what) {
  if (const T* t = file.find<T>(name.text)) return *t;
  throw UnresolvedReference(std::string("no ") + what + " named '" + name.text +
                                "' before this point",
                            name.line, name.column);
}

// Monomials whose single factors are names looked up by `index`.
TermList parse_terms(const Located& v,
                     const std::function<std::optional<std::size_t>(
                         const std::string&)>& index,
                     std::optional<std::size_t> unit) {
  return located(v, [&] {
    TermList out;
    for (const auto& m : detail::parse_monomials(v.text, false)) {
      if (m.coefficient == 0) continue;
      if (m.factors.empty()) {
        if (!unit) throw ExpressionError("constant term without a unit", 0);
        out.emplace_back(*unit, m.coefficient);
        continue;
      }
      if (m.factors.size() != 1)
        throw ExpressionError("expected a single basis word", m.factors[1].position);
      const auto& f = m.factors[0];
      std::string name = f.name;
      if (f.exponent != 1) name += "^" + std::to_string(f.exponent);
      auto i = index(name);
      if (!i) throw ExpressionError("unknown basis word '" + name + "'", f.position);
      out.emplace_back(*i, m.coefficient);
    }
    return out;
  });
}

std::vector<std::pair<std::string, int>> parse_degree_list(const Located& v) {
  std::vector<std::pair<std::string, int>> out;
  std::set<std::string> seen;
  for (const auto& item : split(v, ',')) {
    auto [name, deg] = split_once(item, ":");
    require_identifier(name);
    if (!seen.insert(name.text).second)
      syntax(name, "duplicate word '" + name.text + "'");
    out.emplace_back(name.text, parse_int(deg));
  }
  return out;
}

int truncation_of(const SectionReader& r, const ParseOptions& options) {
  if (const Located* t = r.get("truncation")) return parse_int(*t);
  return options.default_truncation;
}

DgaPtr read_dga(const SectionReader& r, const ParseOptions& options) {
  const Located& kind = r.need("kind");
  if (kind.text == "laurent_group_ring") {
    std::vector<std::string> gens;
    for (const auto& g : split(r.need("generators"), ',')) {
      require_identifier(g);
      gens.push_back(g.text);
    }
    for (const char* key : {"truncation", "basis", "unit", "product",
                            "differential", "corners"})
      if (const Located* v = r.get(key))
        syntax(*v, std::string("'") + key + "' is not used by Laurent group rings");
    return located(r.header(), [&] { return Dga::laurent(gens); });
  }
  if (kind.text == "free") {
    const int truncation = truncation_of(r, options);
    auto gens = parse_degree_list(r.need("generators"));
    std::vector<std::vector<std::pair<Integer, std::vector<std::size_t>>>> diffs(
        gens.size());
    if (const Located* d = r.get("differential")) {
      for (const auto& item : split(*d, ';')) {
        auto [g, value] = split_once(item, "->");
        auto it = std::find_if(gens.begin(), gens.end(),
                               [&](const auto& p) { return p.first == g.text; });
        if (it == gens.end()) syntax(g, "unknown generator '" + g.text + "'");
        auto& target = diffs[static_cast<std::size_t>(it - gens.begin())];
        target = located(value, [&] {
          std::vector<std::pair<Integer, std::vector<std::size_t>>> terms;
          for (const auto& m : detail::parse_monomials(value.text, false)) {
            if (m.coefficient == 0) continue;
            std::vector<std::size_t> letters;
            for (const auto& f : m.factors) {
              auto l = std::find_if(gens.begin(), gens.end(),
                                    [&](const auto& p) { return p.first == f.name; });
              if (l == gens.end())
                throw ExpressionError("unknown generator '" + f.name + "'", f.position);
              if (f.exponent < 1)
                throw ExpressionError("negative exponent", f.position);
              for (std::int64_t k = 0; k < f.exponent; ++k)
                letters.push_back(static_cast<std::size_t>(l - gens.begin()));
            }
            terms.emplace_back(m.coefficient, std::move(letters));
          }
          return terms;
        });
      }
    }
    return located(r.header(), [&] { return free_tensor_algebra(gens, truncation, diffs); });
  }
  if (kind.text == "table") {
    TableDgaBuilder b(truncation_of(r, options));
    const auto basis = parse_degree_list(r.need("basis"));
    for (const auto& word : basis)
      located(r.need("basis"), [&] { return b.add_word(word.first, word.second); });
    auto index = [&](const std::string& name) { return b.find(name); };
    std::optional<std::size_t> unit;
    if (const Located* u = r.get("unit")) {
      unit = b.find(u->text);
      if (!unit) syntax(*u, "unknown basis word '" + u->text + "'");
    } else {
      for (std::size_t i = 0; i < basis.size() && !unit; ++i)
        if (basis[i].second == 0) unit = i;
      if (!unit) syntax(r.need("basis"), "a table DGA needs a degree-0 unit");
    }
    located(r.header(), [&] {
      b.set_unit(*unit);
      return 0;
    });
    auto word_of = [&](const Located& v) {
      auto w = b.find(v.text);
      if (!w) syntax(v, "unknown basis word '" + v.text + "'");
      return *w;
    };
    if (const Located* p = r.get("product"))
      for (const auto& item : split(*p, ';')) {
        auto [lhs, rhs] = split_once(item, "=");
        auto [x, y] = split_once(lhs, "*");
        const std::size_t wx = word_of(x);
        const std::size_t wy = word_of(y);
        TermList value = parse_terms(rhs, index, unit);
        located(item, [&] {
          b.set_product(wx, wy, value);
          return 0;
        });
      }
    if (const Located* d = r.get("differential"))
      for (const auto& item : split(*d, ';')) {
        auto [w, rhs] = split_once(item, "->");
        const std::size_t ww = word_of(w);
        TermList value = parse_terms(rhs, index, unit);
        located(item, [&] {
          b.set_differential(ww, value);
          return 0;
        });
      }
    if (const Located* c = r.get("corners"))
      for (const auto& item : split(*c, ';')) {
        auto [w, corner] = split_once(item, ":");
        const std::size_t ww = word_of(w);
        const std::size_t cc = word_of(corner);
        located(item, [&] {
          b.set_corner(ww, cc);
          return 0;
        });
      }
    return located(r.header(), [&] { return b.build(); });
  }
  syntax(kind, "unknown DGA kind '" + kind.text + "'");
}

Rank1LocalSystem read_local_system(const SectionReader& r, const DgaPtr& a) {
  const Located& rho = r.need("rho");
  if (a->backend() == Backend::laurent) {
    std::vector<int> values(a->generators().size(), 1);
    for (const auto& item : split(rho, ',')) {
      auto [g, v] = split_once(item, ":");
      auto it = std::find(a->generators().begin(), a->generators().end(), g.text);
      if (it == a->generators().end()) syntax(g, "unknown generator '" + g.text + "'");
      values[static_cast<std::size_t>(it - a->generators().begin())] = parse_int(v);
    }
    return located(rho, [&] { return Rank1LocalSystem::on_generators(a, values); });
  }
  std::map<std::size_t, int> values;
  for (const auto& item : split(rho, ',')) {
    auto [w, v] = split_once(item, ":");
    auto word = a->find_word(w.text);
    if (!word) syntax(w, "unknown basis word '" + w.text + "'");
    values[word->as_index()] = parse_int(v);
  }
  return located(rho, [&] { return Rank1LocalSystem::on_words(a, values); });
}

ModulePtr read_module(const SectionReader& r, const DgaPtr& a) {
  const Located* kind = r.get("kind");
  if (kind && kind->text == "regular") {
    for (const char* key : {"basis", "action", "differential", "bound"})
      if (const Located* v = r.get(key))
        syntax(*v, std::string("'") + key + "' is not used by regular modules");
    int box = DgModule::default_box_radius;
    if (const Located* v = r.get("box")) {
      if (a->backend() != Backend::laurent)
        syntax(*v, "'box' applies to Laurent group rings only");
      box = parse_int(*v);
    }
    return located(r.header(), [&] { return DgModule::regular(a, box); });
  }
  if (kind && kind->text != "explicit") syntax(*kind, "unknown module kind '" + kind->text + "'");
  if (const Located* v = r.get("box")) syntax(*v, "'box' applies to regular modules only");
  std::vector<ModuleWord> words;
  for (const auto& [name, deg] : parse_degree_list(r.need("basis")))
    words.push_back({name, deg});
  auto index = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < words.size(); ++i)
      if (words[i].name == name) return i;
    return std::nullopt;
  };
  auto module_word = [&](const Located& v) {
    auto i = index(v.text);
    if (!i) syntax(v, "unknown module word '" + v.text + "'");
    return *i;
  };
  std::vector<ActionEntry> action;
  if (const Located* p = r.get("action"))
    for (const auto& item : split(*p, ';')) {
      auto [lhs, rhs] = split_once(item, "=");
      auto [m, w] = split_once(lhs, "*");
      const std::size_t mw = module_word(m);
      auto aw = a->find_word(w.text);
      if (!aw) syntax(w, "unknown algebra word '" + w.text + "'");
      action.push_back({mw, *aw, parse_terms(rhs, index, std::nullopt)});
    }
  std::map<std::size_t, std::vector<std::pair<std::size_t, Integer>>> differential;
  if (const Located* d = r.get("differential"))
    for (const auto& item : split(*d, ';')) {
      auto [w, rhs] = split_once(item, "->");
      differential[module_word(w)] = parse_terms(rhs, index, std::nullopt);
    }
  std::optional<int> bound;
  if (const Located* v = r.get("bound")) bound = parse_int(*v);
  return located(r.header(), [&] {
    return DgModule::make_explicit(a, words, action, differential, bound);
  });
}

CocycleEntries read_entries(const Located& v, const TwistedComplex& from,
                            const TwistedComplex& to) {
  CocycleEntries out;
  for (const auto& item : split(v, ';')) {
    const std::size_t colon = item.text.find(':');
    if (colon == std::string::npos) syntax(item, "expected 'x,y: value'");
    auto [x, y] = split_once(trim(item.sub(0, colon)), ",");
    Located value = trim(item.sub(colon + 1));
    if (value.text.empty()) syntax(value, "missing value");
    auto xi = from.find_generator(x.text);
    if (!xi) syntax(x, "unknown generator '" + x.text + "'");
    auto yi = to.find_generator(y.text);
    if (!yi) syntax(y, "unknown generator '" + y.text + "'");
    AlgebraElement e = located(value, [&] { return from.algebra()->parse(value.text); });
    if (!out.emplace(std::pair{*xi, *yi}, std::move(e)).second)
      syntax(item, "duplicate entry for " + x.text + "," + y.text);
  }
  return out;
}

ComplexPtr read_complex(const SectionReader& r, const ModulePtr& f) {
  std::vector<Generator> gens;
  for (const auto& item : split(r.need("generators"), ',')) {
    const std::size_t at = item.text.find('@');
    Located head = at == std::string::npos ? item : trim(item.sub(0, at));
    auto [name, deg] = split_once(head, ":");
    require_identifier(name);
    Generator g{name.text, parse_int(deg), std::nullopt, std::nullopt};
    if (at != std::string::npos) {
      Located action = trim(item.sub(at + 1));
      if (action.text.empty()) syntax(action, "missing action value");
      g.action = parse_rational(action);
    }
    gens.push_back(std::move(g));
  }
  if (const Located* l = r.get("labels"))
    for (const auto& item : split(*l, ',')) {
      auto [name, label] = split_once(item, ":");
      auto it = std::find_if(gens.begin(), gens.end(),
                             [&](const Generator& g) { return g.name == name.text; });
      if (it == gens.end()) syntax(name, "unknown generator '" + name.text + "'");
      it->class_label = label.text;
    }
  auto bare = located(r.header(), [&] {
    return std::make_shared<const TwistedComplex>(f, gens, CocycleEntries{});
  });
  CocycleEntries c;
  if (const Located* v = r.get("cocycle")) c = read_entries(*v, *bare, *bare);
  return located(r.header(), [&] {
    return std::make_shared<const TwistedComplex>(f, std::move(gens), std::move(c));
  });
}

}  // namespace

ModelFile parse_model_file(std::string_view text, const ParseOptions& options) {
  ModelFile file;
  for (const RawSection& raw : scan(text)) {
    Section section;
    if (raw.kind == "dga") {
      SectionReader r(raw, {"name", "kind", "generators", "truncation", "basis",
                            "unit", "product", "differential", "corners"});
      section = DgaSection{r.need("name").text, read_dga(r, options)};
    } else if (raw.kind == "local_system") {
      SectionReader r(raw, {"name", "over", "rho"});
      const auto& over = resolve<DgaSection>(file, r.need("over"), "DGA");
      section = LocalSystemSection{r.need("name").text, over.name,
                                   read_local_system(r, over.algebra)};
    } else if (raw.kind == "module") {
      SectionReader r(raw, {"name", "over", "kind", "box", "basis", "action",
                            "differential", "bound", "twist"});
      const auto& over = resolve<DgaSection>(file, r.need("over"), "DGA");
      ModuleSection m{r.need("name").text, over.name, std::nullopt,
                      read_module(r, over.algebra)};
      if (const Located* t = r.get("twist")) {
        const auto& l = resolve<LocalSystemSection>(file, *t, "local system");
        if (l.system.base() != over.algebra)
          syntax(*t, "local system '" + t->text + "' is over another DGA");
        m.twist = l.name;
        m.module = located(*t, [&] { return m.module->twisted(l.system); });
      }
      section = std::move(m);
    } else if (raw.kind == "complex") {
      SectionReader r(raw, {"name", "module", "generators", "cocycle", "labels"});
      const auto& f = resolve<ModuleSection>(file, r.need("module"), "module");
      section = ComplexSection{r.need("name").text, f.name, read_complex(r, f.module)};
    } else if (raw.kind == "map") {
      SectionReader r(raw, {"name", "from", "to", "nu"});
      const auto& from = resolve<ComplexSection>(file, r.need("from"), "complex");
      const auto& to = resolve<ComplexSection>(file, r.need("to"), "complex");
      CocycleEntries nu;
      if (const Located* v = r.get("nu")) nu = read_entries(*v, *from.complex, *to.complex);
      auto map = located(r.header(), [&] {
        return std::make_shared<const ContinuationCocycle>(from.complex, to.complex,
                                                           std::move(nu));
      });
      section = MapSection{r.need("name").text, from.name, to.name, std::move(map)};
    } else if (raw.kind == "homotopy") {
      SectionReader r(raw, {"name", "map0", "map1", "h"});
      const auto& m0 = resolve<MapSection>(file, r.need("map0"), "map");
      const auto& m1 = resolve<MapSection>(file, r.need("map1"), "map");
      CocycleEntries h;
      if (const Located* v = r.get("h"))
        h = read_entries(*v, *m0.map->source(), *m0.map->target());
      auto homotopy = located(r.header(), [&] {
        return std::make_shared<const HomotopyCocycle>(*m0.map, *m1.map, std::move(h));
      });
      section = HomotopySection{r.need("name").text, m0.name, m1.name, std::move(homotopy)};
    } else {
      syntax(raw.header, "unknown section [" + raw.kind + "]");
    }
    const Located& name = std::find_if(raw.entries.begin(), raw.entries.end(), [](const auto& e) {
                            return e.first.text == "name";
                          })->second;
    require_identifier(name);
    if (!file.add(std::move(section)))
      throw DuplicateName("name '" + name.text + "' is already defined", name.line,
                          name.column);
  }
  return file;
}

ModelFile read_model_file(const std::filesystem::path& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SyntaxError("cannot read " + path.string(), 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_file(ss.str(), options);
}

// ---------------------------------------------------------------------------
// Export

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string letters(const std::vector<std::size_t>& seq,
                    const std::vector<std::pair<std::string, int>>& gens) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < seq.size();) {
    std::size_t j = i;
    while (j < seq.size() && seq[j] == seq[i]) ++j;
    std::string p = gens[seq[i]].first;
    if (j - i > 1) p += "^" + std::to_string(j - i);
    parts.push_back(std::move(p));
    i = j;
  }
  return join(parts, "*");
}

std::string format_terms(const std::vector<std::pair<Integer, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& [c, name] = terms[i];
    const bool negative = c < 0;
    const Integer a = abs(c);
    if (i == 0)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    if (name.empty())
      out += a.get_str();
    else if (a == 1)
      out += name;
    else
      out += a.get_str() + "*" + name;
  }
  return out;
}

std::string format_entries(const CocycleEntries& e, const TwistedComplex& from,
                           const TwistedComplex& to) {
  std::vector<std::string> parts;
  for (const auto& [xy, v] : e)
    parts.push_back(from.generator(xy.first).name + "," + to.generator(xy.second).name +
                    ": " + from.algebra()->format(v));
  return join(parts, "; ");
}

void export_dga(std::ostream& os, const Dga& a) {
  if (a.backend() == Backend::laurent) {
    os << "kind = laurent_group_ring\n";
    os << "generators = " << join(a.generators(), ", ") << "\n";
    return;
  }
  if (const auto& fp = a.free_presentation()) {
    os << "kind = free\n";
    os << "truncation = " << a.truncation() << "\n";
    std::vector<std::string> gens;
    for (const auto& [n, d] : fp->generators) gens.push_back(n + ":" + std::to_string(d));
    os << "generators = " << join(gens, ", ") << "\n";
    std::vector<std::string> diffs;
    for (std::size_t i = 0; i < fp->differentials.size(); ++i) {
      if (fp->differentials[i].empty()) continue;
      std::vector<std::pair<Integer, std::string>> terms;
      for (const auto& [c, seq] : fp->differentials[i])
        terms.emplace_back(c, letters(seq, fp->generators));
      diffs.push_back(fp->generators[i].first + " -> " + format_terms(terms));
    }
    if (!diffs.empty()) os << "differential = " << join(diffs, "; ") << "\n";
    return;
  }
  os << "kind = table\n";
  os << "truncation = " << a.truncation() << "\n";
  std::vector<std::string> basis;
  for (const auto& w : a.words()) basis.push_back(w.name + ":" + std::to_string(w.degree));
  os << "basis = " << join(basis, ", ") << "\n";
  os << "unit = " << a.words()[a.unit_word().as_index()].name << "\n";
  std::vector<std::string> products;
  for (const auto& [xy, v] : a.explicit_products())
    products.push_back(a.words()[xy.first].name + "*" + a.words()[xy.second].name +
                       " = " + a.format(v));
  if (!products.empty()) os << "product = " << join(products, "; ") << "\n";
  std::vector<std::string> diffs;
  std::vector<std::string> corners;
  for (std::size_t i = 0; i < a.words().size(); ++i) {
    AlgebraElement d = a.differential_of_word(Word::index(i));
    if (!d.is_zero()) diffs.push_back(a.words()[i].name + " -> " + a.format(d));
    const auto& c = a.words()[i].corner;
    if (a.words()[i].degree > 0 && c)
      corners.push_back(a.words()[i].name + ":" + a.words()[*c].name);
  }
  if (!diffs.empty()) os << "differential = " << join(diffs, "; ") << "\n";
  if (!corners.empty()) os << "corners = " << join(corners, "; ") << "\n";
}

void export_local_system(std::ostream& os, const Rank1LocalSystem& l) {
  const Dga& a = *l.base();
  std::vector<std::string> parts;
  if (a.backend() == Backend::laurent) {
    for (std::size_t i = 0; i < a.generators().size(); ++i)
      parts.push_back(a.generators()[i] + ":" + std::to_string(l.values()[i]));
  } else {
    for (std::size_t i = 0; i < a.words().size(); ++i)
      if (a.words()[i].degree == 0 && Word::index(i) != a.unit_word())
        parts.push_back(a.words()[i].name + ":" + std::to_string(l.values()[i]));
  }
  os << "rho = " << join(parts, ", ") << "\n";
}

void export_module(std::ostream& os, const DgModule& f) {
  const Dga& a = *f.algebra();
  if (f.kind() == ModuleKind::regular) {
    os << "kind = regular\n";
    if (f.box_radius()) os << "box = " << *f.box_radius() << "\n";
    return;
  }
  std::vector<std::string> basis;
  for (const auto& w : f.words()) basis.push_back(w.name + ":" + std::to_string(w.degree));
  os << "basis = " << join(basis, ", ") << "\n";
  auto element = [&](const std::vector<std::pair<std::size_t, Integer>>& terms) {
    ModuleElement m = f.zero();
    for (const auto& [w, c] : terms) m.add_term(w, c);
    return m.is_zero() ? std::string("0") : f.format(m);
  };
  std::vector<std::string> action;
  for (const auto& e : f.action_entries())
    action.push_back(f.word(e.module_word).name + "*" + a.word_name(e.algebra_word) +
                     " = " + element(e.value));
  if (!action.empty()) os << "action = " << join(action, "; ") << "\n";
  std::vector<std::string> diffs;
  for (std::size_t i = 0; i < f.size(); ++i) {
    ModuleElement d = f.differential_of_word(i);
    if (!d.is_zero()) diffs.push_back(f.word(i).name + " -> " + f.format(d));
  }
  if (!diffs.empty()) os << "differential = " << join(diffs, "; ") << "\n";
  if (f.degree_bound()) os << "bound = " << *f.degree_bound() << "\n";
}

void export_complex(std::ostream& os, const TwistedComplex& x) {
  std::vector<std::string> gens;
  std::vector<std::string> labels;
  for (const auto& g : x.generators()) {
    std::string s = g.name + ":" + std::to_string(g.degree);
    if (g.action) s += "@" + g.action->get_str();
    gens.push_back(std::move(s));
    if (g.class_label) labels.push_back(g.name + ":" + *g.class_label);
  }
  os << "generators = " << join(gens, ", ") << "\n";
  if (!x.cocycle().empty()) os << "cocycle = " << format_entries(x.cocycle(), x, x) << "\n";
  if (!labels.empty()) os << "labels = " << join(labels, ", ") << "\n";
}

}  // namespace

std::string export_model_file(const ModelFile& file) {
  std::ostringstream os;
  bool first = true;
  for (const auto& s : file.sections()) {
    if (!first) os << "\n";
    first = false;
    std::visit(
        [&](const auto& sec) {
          using T = std::decay_t<decltype(sec)>;
          if constexpr (std::is_same_v<T, DgaSection>) {
            os << "[dga]\nname = " << sec.name << "\n";
            export_dga(os, *sec.algebra);
          } else if constexpr (std::is_same_v<T, LocalSystemSection>) {
            os << "[local_system]\nname = " << sec.name << "\nover = " << sec.over << "\n";
            export_local_system(os, sec.system);
          } else if constexpr (std::is_same_v<T, ModuleSection>) {
            os << "[module]\nname = " << sec.name << "\nover = " << sec.over << "\n";
            export_module(os, sec.module->untwisted());
            if (sec.twist) os << "twist = " << *sec.twist << "\n";
          } else if constexpr (std::is_same_v<T, ComplexSection>) {
            os << "[complex]\nname = " << sec.name << "\nmodule = " << sec.module << "\n";
            export_complex(os, *sec.complex);
          } else if constexpr (std::is_same_v<T, MapSection>) {
            os << "[map]\nname = " << sec.name << "\nfrom = " << sec.from
               << "\nto = " << sec.to << "\n";
            if (!sec.map->entries().empty())
              os << "nu = "
                 << format_entries(sec.map->entries(), *sec.map->source(),
                                   *sec.map->target())
                 << "\n";
          } else {
            os << "[homotopy]\nname = " << sec.name << "\nmap0 = " << sec.map0
               << "\nmap1 = " << sec.map1 << "\n";
            if (!sec.homotopy->entries().empty())
              os << "h = "
                 << format_entries(sec.homotopy->entries(), *sec.homotopy->source(),
                                   *sec.homotopy->target())
                 << "\n";
          }
        },
        s);
  }
  return os.str();
}

ModelFile model_file_for(const NamedModel& model, const std::string& complex_name) {
  ModelFile file;
  file.add(DgaSection{"A", model.algebra});
  ModuleSection m{"F", "A", std::nullopt, model.module};
  if (const auto& l = model.module->twist()) {
    file.add(LocalSystemSection{"L", "A", *l});
    m.twist = "L";
  }
  file.add(std::move(m));
  file.add(ComplexSection{complex_name, "F", model.complex});
  return file;
}

}  // namespace dgc
