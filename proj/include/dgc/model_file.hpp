#pragma once

// Text model files (.dgc). A file is a sequence of sections, each a header
// line such as `[dga]` followed by `key = value` lines:
//
//   [dga]        name, kind = laurent_group_ring | table | free, and
//                  generators = t, s                        (laurent)
//                  truncation, generators = x:1,
//                  differential = x -> 0; ...               (free)
//                  truncation, basis = e:0, x:1, unit = e,
//                  product = x*x = x2; ..., differential = x -> 0; ...,
//                  corners = x:e; ...                       (table)
//   [local_system] name, over, rho = t:-1, s:1
//   [module]     name, over, kind = regular [box = R] or basis = one:0, u:1,
//                action = one*x = u; ..., differential = u -> 0; ...,
//                bound = N; optional twist = <local system>
//   [complex]    name, module, generators = M:2@1, m:0@0,
//                cocycle = M,m: x; ..., labels = M:A, ...
//   [map]        name, from, to, nu = M,M: 1; ...
//   [homotopy]   name, map0, map1, h = M,m: x; ...
//
// Blank lines and lines starting with '#' are ignored. Actions are integers
// or rationals p/q. Every reference must name an earlier section.

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dgc/chain_maps.hpp"
#include "dgc/errors.hpp"
#include "dgc/models.hpp"

namespace dgc {

/// A problem at a 1-based line and column of a model file.
class ModelFileError : public Error {
 public:
  ModelFileError(const std::string& message, std::size_t line,
                 std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

#define DGC_DEFINE_FILE_ERROR(Name)      \
  class Name : public ModelFileError {   \
   public:                               \
    using ModelFileError::ModelFileError; \
  };

DGC_DEFINE_FILE_ERROR(SyntaxError)
DGC_DEFINE_FILE_ERROR(UnresolvedReference)
DGC_DEFINE_FILE_ERROR(DuplicateName)

#undef DGC_DEFINE_FILE_ERROR

struct DgaSection {
  std::string name;
  DgaPtr algebra;
};

struct LocalSystemSection {
  std::string name;
  std::string over;
  Rank1LocalSystem system;
};

struct ModuleSection {
  std::string name;
  std::string over;
  std::optional<std::string> twist;
  /// Already twisted when `twist` is set.
  ModulePtr module;
};

struct ComplexSection {
  std::string name;
  std::string module;
  ComplexPtr complex;
};

struct MapSection {
  std::string name;
  std::string from;
  std::string to;
  std::shared_ptr<const ContinuationCocycle> map;
};

struct HomotopySection {
  std::string name;
  std::string map0;
  std::string map1;
  std::shared_ptr<const HomotopyCocycle> homotopy;
};

using Section = std::variant<DgaSection, LocalSystemSection, ModuleSection,
                             ComplexSection, MapSection, HomotopySection>;

/// Ordered sections with one namespace for all names.
class ModelFile {
 public:
  /// Returns false (and adds nothing) if the name is taken.
  bool add(Section s);

  const std::vector<Section>& sections() const { return sections_; }

  template <class T>
  const T* find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return nullptr;
    return std::get_if<T>(&sections_[it->second]);
  }

  /// Names of the sections of type T, in file order.
  template <class T>
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& s : sections_)
      if (const T* t = std::get_if<T>(&s)) out.push_back(t->name);
    return out;
  }

 private:
  std::vector<Section> sections_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct ParseOptions {
  /// Truncation of table and free DGAs without a `truncation` key.
  int default_truncation = dgc::default_truncation;
};

ModelFile parse_model_file(std::string_view text, const ParseOptions& options = {});
/// Throws SyntaxError at line 0 when the file cannot be read.
ModelFile read_model_file(const std::filesystem::path& path,
                          const ParseOptions& options = {});

/// Canonical text; parse_model_file(export_model_file(m)) exports to the same
/// bytes.
std::string export_model_file(const ModelFile& file);

/// A file holding a built-in model: DGA "A", local system "L" when the module
/// is twisted, module "F" and the complex under `complex_name`.
ModelFile model_file_for(const NamedModel& model, const std::string& complex_name);

}  // namespace dgc
