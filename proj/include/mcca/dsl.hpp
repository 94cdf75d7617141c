#pragma once

// Text format for models (.mcca):
//
//   # comment
//   model V-ex31;
//   gen x1 : 10;
//   gen y1 : 41;
//   d y1 = x1^3*x2 - 3/2*x1;
//
// `^` binds tighter than `*`, which binds tighter than `+` and `-`.
// Generators must be declared before they are referenced; a generator without
// a `d` line is closed.

#include "mcca/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mcca {

class ParseError : public Error {
public:
    ParseError(std::string filename, int line, int column, int length, std::string message);

    const std::string& filename() const { return filename_; }
    int line() const { return line_; }
    int column() const { return column_; }
    int length() const { return length_; }
    const std::string& message() const { return message_; }

private:
    std::string filename_;
    int line_, column_, length_;
    std::string message_;
};

SullivanModel parse_model(std::string_view text, const std::string& filename = "<input>");
std::string serialize(const SullivanModel& m);

/// A polynomial in the given generators, e.g. "x1^3*x2 - 1/2*y1" (not necessarily homogeneous).
Polynomial parse_polynomial(std::string_view expr, const GeneratorSet& gens);

/// "V-ex31", "W-ex32", "U1".."U8", "E2".."E7".
const std::vector<std::string>& builtin_labels();
/// Shared instance per label, so memoized computations are reused.
ModelPtr load_builtin(const std::string& label);
/// A builtin label, or else a path to a .mcca file.
ModelPtr load_model(const std::string& label_or_path);

}  // namespace mcca
