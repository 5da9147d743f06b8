#include "dynmedian/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "dynmedian/errors.hpp"
#include "dynmedian/util.hpp"

namespace dynmedian {

namespace {

constexpr std::size_t kMpsNameLimit = 8;
constexpr std::size_t kLpNameLimit = 255;

bool valid_name(const std::string& name) {
    if (name.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
            return false;
    return true;
}

// Truncates every name to the format limit and reports originals that end up
// sharing the same truncated form.
void check_names(const std::vector<std::string>& names, std::size_t limit,
                 const std::string& kind) {
    std::map<std::string, std::string> seen;
    std::string collisions;
    for (const auto& name : names) {
        if (!valid_name(name))
            throw FormatError("cannot export " + kind + " name '" + name +
                              "': must start with a letter or underscore and use only "
                              "letters, digits, '_' or '.'");
        std::string cut = name.substr(0, limit);
        auto [it, fresh] = seen.emplace(cut, name);
        if (!fresh && it->second != name)
            collisions += (collisions.empty() ? "" : ", ") + it->second + " vs " + name;
    }
    if (!collisions.empty())
        throw FormatError("name collision after truncating " + kind + " names to " +
                          std::to_string(limit) + " characters: " + collisions);
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

double parse_number(const std::string& token, const std::string& where) {
    std::string low;
    for (char c : token) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "inf" || low == "+inf" || low == "infinity" || low == "+infinity")
        return kInfinity;
    if (low == "-inf" || low == "-infinity") return -kInfinity;
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + token.size())
        throw FormatError("expected a number in " + where + ", got '" + token + "'");
    return v;
}

bool looks_numeric(const std::string& token) {
    std::string low;
    for (char c : token) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "inf" || low == "+inf" || low == "-inf" || low == "infinity" ||
        low == "+infinity" || low == "-infinity")
        return true;
    const char* begin = token.c_str();
    char* end = nullptr;
    (void)std::strtod(begin, &end);
    return end == begin + token.size();
}

// --- MPS ---

std::string export_mps(const LinearModel& m) {
    std::vector<std::string> row_names{"OBJ"};
    for (const auto& c : m.constraints) row_names.push_back(c.name);
    check_names(row_names, kMpsNameLimit, "row");
    std::vector<std::string> col_names;
    col_names.reserve(m.variables.size());
    for (const auto& v : m.variables) col_names.push_back(v.name);
    check_names(col_names, kMpsNameLimit, "column");

    std::ostringstream out;
    out << "NAME          " << m.name << "\n";
    out << "ROWS\n";
    out << " N  OBJ\n";
    for (const auto& c : m.constraints) {
        char sense = c.sense == Sense::LessEqual ? 'L'
                     : c.sense == Sense::Equal   ? 'E'
                                                 : 'G';
        out << " " << sense << "  " << c.name << "\n";
    }

    // Column-major view of the coefficient matrix.
    std::vector<std::vector<std::pair<int, double>>> columns(m.variables.size());
    for (std::size_t r = 0; r < m.constraints.size(); ++r)
        for (const auto& term : m.constraints[r].terms)
            columns[term.var].emplace_back(static_cast<int>(r), term.coeff);
    std::vector<double> obj_coeff(m.variables.size(), 0.0);
    std::vector<bool> in_objective(m.variables.size(), false);
    for (const auto& term : m.objective) {
        obj_coeff[term.var] += term.coeff;
        in_objective[term.var] = true;
    }

    out << "COLUMNS\n";
    bool integer_mode = false;
    auto marker = [&out](const char* state) {
        out << "    MARKER                 'MARKER'                 '" << state << "'\n";
    };
    for (std::size_t v = 0; v < m.variables.size(); ++v) {
        bool want_integer = m.variables[v].kind == VarKind::Binary;
        if (want_integer != integer_mode) {
            marker(want_integer ? "INTORG" : "INTEND");
            integer_mode = want_integer;
        }
        const std::string& name = m.variables[v].name;
        bool wrote = false;
        if (in_objective[v]) {
            out << "    " << pad(name, 10) << pad("OBJ", 10)
                << format_double(obj_coeff[v]) << "\n";
            wrote = true;
        }
        for (const auto& [row, coeff] : columns[v]) {
            out << "    " << pad(name, 10) << pad(m.constraints[row].name, 10)
                << format_double(coeff) << "\n";
            wrote = true;
        }
        // A column must appear at least once to be declared.
        if (!wrote) out << "    " << pad(name, 10) << pad("OBJ", 10) << "0\n";
    }
    if (integer_mode) marker("INTEND");

    out << "RHS\n";
    if (m.objective_constant != 0.0)
        out << "    " << pad("RHS", 10) << pad("OBJ", 10)
            << format_double(-m.objective_constant) << "\n";
    for (const auto& c : m.constraints)
        if (c.rhs != 0.0)
            out << "    " << pad("RHS", 10) << pad(c.name, 10) << format_double(c.rhs)
                << "\n";

    out << "BOUNDS\n";
    for (const auto& v : m.variables) {
        if (v.kind == VarKind::Binary) {
            if (v.lower != 0.0 || v.upper != 1.0)
                throw FormatError("binary variable " + v.name + " must have bounds {0,1}");
            out << " BV " << pad("BND", 9) << v.name << "\n";
            continue;
        }
        if (v.lower == 0.0 && v.upper == kInfinity) continue;
        if (v.lower == -kInfinity && v.upper == kInfinity) {
            out << " FR " << pad("BND", 9) << v.name << "\n";
            continue;
        }
        if (v.lower == v.upper) {
            out << " FX " << pad("BND", 9) << pad(v.name, 10) << format_double(v.lower)
                << "\n";
            continue;
        }
        if (v.lower == -kInfinity)
            out << " MI " << pad("BND", 9) << v.name << "\n";
        else if (v.lower != 0.0)
            out << " LO " << pad("BND", 9) << pad(v.name, 10) << format_double(v.lower)
                << "\n";
        if (v.upper != kInfinity)
            out << " UP " << pad("BND", 9) << pad(v.name, 10) << format_double(v.upper)
                << "\n";
    }
    out << "ENDATA\n";
    return out.str();
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

LinearModel parse_mps(const std::string& text) {
    LinearModel m;
    m.name.clear();
    enum class Section { None, Name, Rows, Columns, Rhs, Bounds, Done };
    Section section = Section::None;
    std::string obj_row;
    std::map<std::string, int> row_index;
    bool integer_mode = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '*') continue;
        std::string where = "MPS line " + std::to_string(line_no);
        bool header = !std::isspace(static_cast<unsigned char>(line[0]));
        auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        if (header) {
            std::string key = tokens[0];
            if (key == "NAME") {
                if (tokens.size() > 1) m.name = tokens[1];
                section = Section::Name;
            } else if (key == "ROWS") {
                section = Section::Rows;
            } else if (key == "COLUMNS") {
                section = Section::Columns;
            } else if (key == "RHS") {
                section = Section::Rhs;
            } else if (key == "BOUNDS") {
                section = Section::Bounds;
            } else if (key == "ENDATA") {
                section = Section::Done;
                break;
            } else if (key == "RANGES") {
                throw FormatError("RANGES sections are not supported (" + where + ")");
            } else {
                throw FormatError("unknown MPS section '" + key + "' (" + where + ")");
            }
            continue;
        }
        switch (section) {
            case Section::Rows: {
                if (tokens.size() != 2)
                    throw FormatError("malformed row entry (" + where + ")");
                std::string type = tokens[0];
                if (type == "N" || type == "n") {
                    if (!obj_row.empty())
                        throw FormatError("multiple objective rows (" + where + ")");
                    obj_row = tokens[1];
                } else {
                    Sense sense;
                    if (type == "L" || type == "l")
                        sense = Sense::LessEqual;
                    else if (type == "G" || type == "g")
                        sense = Sense::GreaterEqual;
                    else if (type == "E" || type == "e")
                        sense = Sense::Equal;
                    else
                        throw FormatError("unknown row type '" + type + "' (" + where + ")");
                    row_index[tokens[1]] = m.add_constraint(tokens[1], {}, sense, 0.0);
                }
                break;
            }
            case Section::Columns: {
                bool is_marker = false;
                for (const auto& tok : tokens) is_marker = is_marker || tok == "'MARKER'";
                if (is_marker) {
                    for (const auto& tok : tokens) {
                        if (tok == "'INTORG'") integer_mode = true;
                        if (tok == "'INTEND'") integer_mode = false;
                    }
                    break;
                }
                if (tokens.size() != 3 && tokens.size() != 5)
                    throw FormatError("malformed column entry (" + where + ")");
                const std::string& col = tokens[0];
                int var = m.var_index(col);
                if (var < 0)
                    var = m.add_variable(col,
                                         integer_mode ? VarKind::Binary : VarKind::Continuous,
                                         0.0, kInfinity);
                for (std::size_t f = 1; f + 1 < tokens.size(); f += 2) {
                    const std::string& row = tokens[f];
                    double value = parse_number(tokens[f + 1], where);
                    if (row == obj_row) {
                        if (value != 0.0) m.add_objective_term(var, value);
                    } else {
                        auto it = row_index.find(row);
                        if (it == row_index.end())
                            throw FormatError("column entry for unknown row '" + row +
                                              "' (" + where + ")");
                        m.constraints[it->second].terms.push_back({var, value});
                    }
                }
                break;
            }
            case Section::Rhs: {
                if (tokens.size() != 3 && tokens.size() != 5)
                    throw FormatError("malformed RHS entry (" + where + ")");
                for (std::size_t f = 1; f + 1 < tokens.size(); f += 2) {
                    const std::string& row = tokens[f];
                    double value = parse_number(tokens[f + 1], where);
                    if (row == obj_row) {
                        m.objective_constant = -value;
                    } else {
                        auto it = row_index.find(row);
                        if (it == row_index.end())
                            throw FormatError("RHS entry for unknown row '" + row + "' (" +
                                              where + ")");
                        m.constraints[it->second].rhs = value;
                    }
                }
                break;
            }
            case Section::Bounds: {
                if (tokens.size() < 3)
                    throw FormatError("malformed bound entry (" + where + ")");
                std::string type;
                for (char c : tokens[0])
                    type += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                const std::string& var_name = tokens[2];
                int var = m.var_index(var_name);
                if (var < 0)
                    throw FormatError("bound for unknown column '" + var_name + "' (" +
                                      where + ")");
                Variable& v = m.variables[var];
                auto need_value = [&]() {
                    if (tokens.size() < 4)
                        throw FormatError("bound type " + type + " needs a value (" + where +
                                          ")");
                    return parse_number(tokens[3], where);
                };
                if (type == "UP")
                    v.upper = need_value();
                else if (type == "LO")
                    v.lower = need_value();
                else if (type == "FX")
                    v.lower = v.upper = need_value();
                else if (type == "FR") {
                    v.lower = -kInfinity;
                    v.upper = kInfinity;
                } else if (type == "MI")
                    v.lower = -kInfinity;
                else if (type == "PL")
                    v.upper = kInfinity;
                else if (type == "BV") {
                    v.kind = VarKind::Binary;
                    v.lower = 0.0;
                    v.upper = 1.0;
                } else
                    throw FormatError("unknown bound type '" + tokens[0] + "' (" + where +
                                      ")");
                break;
            }
            case Section::Name:
            case Section::None:
            case Section::Done:
                throw FormatError("data outside of a section (" + where + ")");
        }
    }
    if (section != Section::Done) throw FormatError("MPS input has no ENDATA line");
    for (const auto& v : m.variables)
        if (v.kind == VarKind::Binary && (v.lower != 0.0 || v.upper != 1.0))
            throw FormatError("integer column " + v.name +
                              " is not binary; general integers are not supported");
    return m;
}

// --- LP text ---

std::vector<std::string> expression_chunks(const LinearModel& m,
                                           const std::vector<LinearTerm>& terms,
                                           double constant) {
    std::vector<std::string> chunks;
    chunks.reserve(terms.size() + 1);
    bool first = true;
    for (const auto& term : terms) {
        double c = term.coeff;
        std::string sign = c < 0 ? "- " : (first ? "" : "+ ");
        chunks.push_back(sign + format_double(std::abs(c)) + " " +
                         m.variables[term.var].name);
        first = false;
    }
    if (constant != 0.0) {
        std::string sign = constant < 0 ? "- " : (first ? "" : "+ ");
        chunks.push_back(sign + format_double(std::abs(constant)));
    }
    return chunks;
}

// Joins head, chunks and tail into lines of at most ~78 columns;
// continuation lines are indented two spaces.
void emit_wrapped(std::ostringstream& out, const std::string& head,
                  const std::vector<std::string>& chunks, const std::string& tail) {
    std::string line = head;
    auto push = [&out, &line](const std::string& piece) {
        std::string with = line.empty() ? piece : line + " " + piece;
        if (with.size() > 78 && !line.empty()) {
            out << line << "\n";
            line = "  " + piece;
        } else {
            line = std::move(with);
        }
    };
    for (const auto& chunk : chunks) push(chunk);
    if (!tail.empty()) push(tail);
    out << line << "\n";
}

std::string export_lp(const LinearModel& m) {
    std::vector<std::string> names;
    names.reserve(m.variables.size() + m.constraints.size());
    for (const auto& v : m.variables) names.push_back(v.name);
    check_names(names, kLpNameLimit, "variable");
    names.clear();
    for (const auto& c : m.constraints) names.push_back(c.name);
    check_names(names, kLpNameLimit, "constraint");

    std::ostringstream out;
    out << "\\ Problem: " << m.name << "\n";
    out << "Minimize\n";
    emit_wrapped(out, " obj:", expression_chunks(m, m.objective, m.objective_constant), "");

    out << "Subject To\n";
    for (const auto& c : m.constraints) {
        const char* rel = c.sense == Sense::LessEqual ? "<="
                          : c.sense == Sense::Equal  ? "="
                                                     : ">=";
        emit_wrapped(out, " " + c.name + ":", expression_chunks(m, c.terms, 0.0),
                     std::string(rel) + " " + format_double(c.rhs));
    }

    // Bounds and Binaries are listed in name order so that re-exporting a
    // parsed file reproduces it exactly even though parsing discovers
    // variables in file order.
    std::vector<const Variable*> ordered;
    ordered.reserve(m.variables.size());
    for (const auto& v : m.variables) ordered.push_back(&v);
    std::sort(ordered.begin(), ordered.end(),
              [](const Variable* a, const Variable* b) { return a->name < b->name; });

    // A continuous variable with default bounds that appears in no expression
    // would otherwise leave no trace in the file; an explicit ">= 0" line
    // keeps it discoverable by the parser (binaries are listed anyway).
    std::vector<bool> referenced(m.variables.size(), false);
    for (const auto& term : m.objective) referenced[term.var] = true;
    for (const auto& c : m.constraints)
        for (const auto& term : c.terms) referenced[term.var] = true;

    out << "Bounds\n";
    for (const Variable* v : ordered) {
        if (v->kind == VarKind::Binary) {
            if (v->lower != 0.0 || v->upper != 1.0)
                throw FormatError("binary variable " + v->name + " must have bounds {0,1}");
            continue;
        }
        if (v->lower == 0.0 && v->upper == kInfinity) {
            if (!referenced[static_cast<std::size_t>(v - m.variables.data())])
                out << " " << v->name << " >= 0\n";
            continue;
        }
        if (v->lower == -kInfinity && v->upper == kInfinity) {
            out << " " << v->name << " free\n";
        } else if (v->lower == v->upper) {
            out << " " << v->name << " = " << format_double(v->lower) << "\n";
        } else if (v->lower == -kInfinity) {
            out << " -infinity <= " << v->name << " <= " << format_double(v->upper) << "\n";
        } else if (v->lower == 0.0) {
            out << " " << v->name << " <= " << format_double(v->upper) << "\n";
        } else if (v->upper == kInfinity) {
            out << " " << v->name << " >= " << format_double(v->lower) << "\n";
        } else {
            out << " " << format_double(v->lower) << " <= " << v->name << " <= "
                << format_double(v->upper) << "\n";
        }
    }

    bool any_binary = false;
    for (const auto& v : m.variables) any_binary = any_binary || v.kind == VarKind::Binary;
    if (any_binary) {
        out << "Binaries\n";
        std::string bline = "";
        for (const Variable* v : ordered) {
            if (v->kind != VarKind::Binary) continue;
            std::string chunk = " " + v->name;
            if (bline.size() + chunk.size() > 78 && !bline.empty()) {
                out << bline << "\n";
                bline.clear();
            }
            bline += chunk;
        }
        if (!bline.empty()) out << bline << "\n";
    }
    out << "End\n";
    return out.str();
}

struct LpTokens {
    std::vector<std::string> tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const { return tokens[pos]; }
    std::string next() { return tokens[pos++]; }
};

std::string lower_copy(const std::string& s) {
    std::string out;
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_section_keyword(const std::string& low) {
    return low == "minimize" || low == "min" || low == "maximize" || low == "max" ||
           low == "subject" || low == "st" || low == "s.t." || low == "bounds" ||
           low == "binaries" || low == "binary" || low == "bin" || low == "generals" ||
           low == "general" || low == "gen" || low == "end";
}

LinearModel parse_lp(const std::string& text) {
    LinearModel m;
    m.name.clear();

    LpTokens stream;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            auto cut = line.find('\\');
            if (cut != std::string::npos) {
                std::string comment = line.substr(cut + 1);
                if (comment.rfind(" Problem: ", 0) == 0)
                    m.name = comment.substr(std::string(" Problem: ").size());
                line = line.substr(0, cut);
            }
            for (const auto& tok : split_tokens(line)) stream.tokens.push_back(tok);
        }
    }

    auto ensure_var = [&m](const std::string& name) {
        int idx = m.var_index(name);
        if (idx >= 0) return idx;
        if (!valid_name(name))
            throw FormatError("invalid LP variable name '" + name + "'");
        return m.add_variable(name, VarKind::Continuous, 0.0, kInfinity);
    };

    enum class Section { None, Objective, Constraints, Bounds, Binaries };
    Section section = Section::None;
    bool saw_end = false;
    int auto_row = 0;

    auto is_relation = [](const std::string& t) {
        return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">";
    };

    // Reads "[label:] terms... [relation rhs]" and stores it.
    auto parse_row = [&](bool objective) {
        std::string label;
        if (!stream.done() && stream.peek().back() == ':' && stream.peek().size() > 1) {
            label = stream.next();
            label.pop_back();
        } else if (!stream.done() && stream.pos + 1 < stream.tokens.size() &&
                   stream.tokens[stream.pos + 1] == ":") {
            label = stream.next();
            stream.next();
        }
        std::vector<LinearTerm> terms;
        double constant = 0.0;
        double sign = 1.0;
        bool have_coeff = false;
        double coeff = 1.0;
        Sense sense = Sense::LessEqual;
        bool saw_relation = false;
        double rhs = 0.0;
        while (!stream.done()) {
            std::string tok = stream.peek();
            std::string low = lower_copy(tok);
            if (is_section_keyword(low)) break;
            stream.next();
            if (tok == "+") continue;
            if (tok == "-") {
                sign = -sign;
                continue;
            }
            if (is_relation(tok)) {
                if (objective) throw FormatError("relation inside objective");
                if (tok == "<" || tok == "<=")
                    sense = Sense::LessEqual;
                else if (tok == ">" || tok == ">=")
                    sense = Sense::GreaterEqual;
                else
                    sense = Sense::Equal;
                saw_relation = true;
                if (stream.done()) throw FormatError("constraint ends before its rhs");
                rhs = parse_number(stream.next(), "constraint rhs");
                break;
            }
            if (looks_numeric(tok)) {
                double value = parse_number(tok, "expression");
                if (have_coeff) {
                    // Two numbers in a row: the first was a constant.
                    constant += sign * coeff;
                    sign = 1.0;
                }
                coeff = value;
                have_coeff = true;
                continue;
            }
            // A name: close the pending term.
            int var = ensure_var(tok);
            terms.push_back({var, sign * (have_coeff ? coeff : 1.0)});
            sign = 1.0;
            have_coeff = false;
        }
        if (have_coeff) constant += sign * coeff;
        if (objective) {
            m.objective = std::move(terms);
            m.objective_constant = constant;
        } else {
            if (!saw_relation) {
                if (terms.empty() && constant == 0.0 && label.empty()) return false;
                throw FormatError("constraint without a relation");
            }
            if (label.empty()) label = "c" + std::to_string(auto_row);
            ++auto_row;
            m.add_constraint(label, std::move(terms), sense, rhs - constant);
        }
        return true;
    };

    while (!stream.done()) {
        std::string tok = stream.peek();
        std::string low = lower_copy(tok);
        if (low == "maximize" || low == "max")
            throw FormatError("maximization LP files are not supported");
        if (low == "minimize" || low == "min") {
            stream.next();
            section = Section::Objective;
            parse_row(true);
            continue;
        }
        if (low == "subject" || low == "st" || low == "s.t.") {
            stream.next();
            if (low == "subject") {
                if (stream.done() || lower_copy(stream.peek()) != "to")
                    throw FormatError("expected 'To' after 'Subject'");
                stream.next();
            }
            section = Section::Constraints;
            continue;
        }
        if (low == "bounds") {
            stream.next();
            section = Section::Bounds;
            continue;
        }
        if (low == "binaries" || low == "binary" || low == "bin") {
            stream.next();
            section = Section::Binaries;
            continue;
        }
        if (low == "generals" || low == "general" || low == "gen")
            throw FormatError("general integer variables are not supported");
        if (low == "end") {
            stream.next();
            saw_end = true;
            break;
        }

        switch (section) {
            case Section::Constraints:
                if (!parse_row(false)) stream.next();
                break;
            case Section::Bounds: {
                if (looks_numeric(tok)) {
                    double lower = parse_number(stream.next(), "bound");
                    if (stream.done() || (stream.peek() != "<=" && stream.peek() != "<"))
                        throw FormatError("expected '<=' after bound value");
                    stream.next();
                    if (stream.done()) throw FormatError("bound line ends early");
                    int var = ensure_var(stream.next());
                    m.variables[var].lower = lower;
                    if (!stream.done() && (stream.peek() == "<=" || stream.peek() == "<")) {
                        stream.next();
                        if (stream.done()) throw FormatError("bound line ends early");
                        m.variables[var].upper = parse_number(stream.next(), "bound");
                    }
                    break;
                }
                int var = ensure_var(stream.next());
                if (stream.done()) throw FormatError("bound line ends early");
                std::string op = stream.next();
                if (lower_copy(op) == "free") {
                    m.variables[var].lower = -kInfinity;
                    m.variables[var].upper = kInfinity;
                } else if (op == "<=" || op == "<") {
                    m.variables[var].upper = parse_number(stream.next(), "bound");
                } else if (op == ">=" || op == ">") {
                    m.variables[var].lower = parse_number(stream.next(), "bound");
                } else if (op == "=") {
                    double v = parse_number(stream.next(), "bound");
                    m.variables[var].lower = v;
                    m.variables[var].upper = v;
                } else {
                    throw FormatError("malformed bound near '" + op + "'");
                }
                break;
            }
            case Section::Binaries: {
                int var = ensure_var(stream.next());
                m.variables[var].kind = VarKind::Binary;
                m.variables[var].lower = 0.0;
                m.variables[var].upper = 1.0;
                break;
            }
            case Section::Objective:
            case Section::None:
                throw FormatError("unexpected token '" + tok + "' in LP input");
        }
    }
    if (!saw_end) throw FormatError("LP input has no End line");
    return m;
}

}  // namespace

std::string export_model(const LinearModel& model, ModelFormat format) {
    return format == ModelFormat::Mps ? export_mps(model) : export_lp(model);
}

LinearModel parse_model(const std::string& text, ModelFormat format) {
    return format == ModelFormat::Mps ? parse_mps(text) : parse_lp(text);
}

void write_model(const LinearModel& model, ModelFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out << export_model(model, format);
}

LinearModel read_model(const std::string& path, ModelFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), format);
}

}  // namespace dynmedian
