#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qvl {

/// Base class for every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SourceSpan {
  std::string file = "<input>";
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

inline std::string to_string(const SourceSpan& s) {
  return s.file + ":" + std::to_string(s.line) + ":" + std::to_string(s.column);
}

class ParseError : public Error {
public:
  ParseError(SourceSpan span, std::string expected, std::string found)
      : Error(to_string(span) + ": expected " + expected + ", found " + found),
        span_(std::move(span)),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const SourceSpan& span() const noexcept { return span_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

private:
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

/// Error carrying the offending name (module, rule, part, individual or fragment).
class NamedError : public Error {
public:
  NamedError(const std::string& what, std::string name)
      : Error(what + ": " + name), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

#define QVL_NAMED_ERROR(Type, label)                                     \
  class Type : public NamedError {                                       \
  public:                                                                \
    explicit Type(std::string name) : NamedError(label, std::move(name)) {} \
  };

QVL_NAMED_ERROR(UnknownImport, "unknown import")
QVL_NAMED_ERROR(DuplicateRuleId, "duplicate rule id")
QVL_NAMED_ERROR(DuplicateSpec, "duplicate spec")
QVL_NAMED_ERROR(UndeclaredName, "undeclared name")
QVL_NAMED_ERROR(UnknownPartRef, "unknown part reference")
QVL_NAMED_ERROR(DuplicatePart, "duplicate part")
QVL_NAMED_ERROR(DuplicateAxis, "duplicate axis")
QVL_NAMED_ERROR(UndeclaredIndividual, "undeclared individual")
QVL_NAMED_ERROR(UnknownFragment, "unknown fragment")
QVL_NAMED_ERROR(NotDerived, "not derived")
QVL_NAMED_ERROR(BuiltinTypeError, "builtin type error")
QVL_NAMED_ERROR(MalformedRule, "malformed rule")
QVL_NAMED_ERROR(PreconditionViolation, "precondition violated")

#undef QVL_NAMED_ERROR

class ImportCycle : public Error {
public:
  explicit ImportCycle(std::vector<std::string> path)
      : Error("import cycle: " + join(path)), path_(std::move(path)) {}

  const std::vector<std::string>& path() const noexcept { return path_; }

private:
  static std::string join(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& p : path) {
      if (!out.empty()) out += " -> ";
      out += p;
    }
    return out;
  }
  std::vector<std::string> path_;
};

class RefinementCycle : public Error {
public:
  explicit RefinementCycle(std::string fragment)
      : Error("refinement cycle through " + fragment), fragment_(std::move(fragment)) {}

  const std::string& fragment() const noexcept { return fragment_; }

private:
  std::string fragment_;
};

class UnsafeVariable : public Error {
public:
  UnsafeVariable(std::string rule, std::string variable)
      : Error("unsafe variable ?" + variable + " in rule " + rule),
        rule_(std::move(rule)),
        variable_(std::move(variable)) {}

  const std::string& rule() const noexcept { return rule_; }
  const std::string& variable() const noexcept { return variable_; }

private:
  std::string rule_;
  std::string variable_;
};

}  // namespace qvl
