#include "medoidlp/lp_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "medoidlp/model.hpp"

namespace medoidlp {

namespace {

void append_term(std::string& out, double coef, const std::string& name, bool first) {
    if (first) {
        if (coef < 0.0)
            out += "- ";
    } else {
        out += (coef < 0.0) ? " - " : " + ";
    }
    out += format_double(std::abs(coef));
    out += ' ';
    out += name;
}

std::string bound_value(double v) {
    if (v == kInf) return "+inf";
    if (v == -kInf) return "-inf";
    return format_double(v);
}

} // namespace

std::string export_lp_text(const LinearProgram& lp) {
    lp.validate();
    if (!lp.has_names())
        throw std::invalid_argument("export_lp_text requires named variables");

    std::string out;
    out += lp.sense == Sense::minimize ? "Minimize\n" : "Maximize\n";
    out += " obj:";
    {
        std::string line;
        for (int j = 0; j < lp.num_vars(); ++j)
            append_term(line, lp.objective()[j], lp.name(j), false);
        out += line;
        out += '\n';
    }
    out += "Subject To\n";
    for (int r = 0; r < lp.num_constraints(); ++r) {
        const auto& c = lp.constraints()[r];
        std::string line = " c" + std::to_string(r) + ":";
        bool first = true;
        for (auto [j, v] : c.coeffs) {
            line += ' ';
            std::string t;
            append_term(t, v, lp.name(j), first);
            line += t;
            first = false;
        }
        if (first) line += " 0 " + lp.name(0);
        switch (c.rel) {
            case Relation::le: line += " <= "; break;
            case Relation::ge: line += " >= "; break;
            case Relation::eq: line += " = "; break;
        }
        line += format_double(c.rhs);
        out += line;
        out += '\n';
    }
    out += "Bounds\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        double lo = lp.lower()[j], hi = lp.upper()[j];
        if (lo == 0.0 && hi == kInf) continue; // LP-format default
        if (lo == -kInf && hi == kInf) {
            out += ' ' + lp.name(j) + " free\n";
        } else {
            out += ' ' + bound_value(lo) + " <= " + lp.name(j) + " <= " + bound_value(hi) + '\n';
        }
    }
    out += "End\n";
    return out;
}

namespace {

struct Token {
    enum Kind { word, number, plus, minus, rel_le, rel_ge, rel_eq, colon } kind;
    std::string text;
    double value = 0.0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    bool next(Token& tok) {
        skip_space();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        if (c == '\\') { // comment to end of line
            while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            return next(tok);
        }
        if (c == '+') { ++pos_; tok = {Token::plus, "+"}; return true; }
        if (c == '-') {
            // "-inf" is a number-like word; bare '-' is a sign.
            if (starts_with_ci("-inf")) {
                pos_ += 4;
                tok = {Token::number, "-inf", -kInf};
                return true;
            }
            ++pos_; tok = {Token::minus, "-"}; return true;
        }
        if (c == ':') { ++pos_; tok = {Token::colon, ":"}; return true; }
        if (c == '<' || c == '>' || c == '=') {
            std::string r(1, c);
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '=' || s_[pos_] == '<' || s_[pos_] == '>')) {
                r += s_[pos_];
                ++pos_;
            }
            if (r == "<" || r == "<=" || r == "=<") tok = {Token::rel_le, r};
            else if (r == ">" || r == ">=" || r == "=>") tok = {Token::rel_ge, r};
            else tok = {Token::rel_eq, r};
            return true;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                    s_[pos_] == 'e' || s_[pos_] == 'E' ||
                    ((s_[pos_] == '+' || s_[pos_] == '-') &&
                     (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
                ++pos_;
            std::string text = s_.substr(start, pos_ - start);
            double v = 0.0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc())
                throw std::invalid_argument("bad number in LP text: " + text);
            tok = {Token::number, text, v};
            return true;
        }
        // identifier / keyword
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
               std::string("+-<>=:\\").find(s_[pos_]) == std::string::npos)
            ++pos_;
        std::string w = s_.substr(start, pos_ - start);
        std::string lower;
        for (char ch : w) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (lower == "inf" || lower == "+inf" || lower == "infinity") {
            tok = {Token::number, w, kInf};
            return true;
        }
        tok = {Token::word, w};
        return true;
    }

private:
    bool starts_with_ci(const char* prefix) const {
        std::size_t i = 0;
        while (prefix[i]) {
            if (pos_ + i >= s_.size() ||
                std::tolower(static_cast<unsigned char>(s_[pos_ + i])) != prefix[i])
                return false;
            ++i;
        }
        // must not be followed by an identifier character
        std::size_t after = pos_ + i;
        return after >= s_.size() || std::isspace(static_cast<unsigned char>(s_[after])) ||
               std::string("+-<>=:").find(s_[after]) != std::string::npos;
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

std::string lowercase(const std::string& w) {
    std::string out;
    for (char c : w) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

LinearProgram parse_lp_text(const std::string& text) {
    Lexer lex(text);
    std::vector<Token> toks;
    Token t;
    while (lex.next(t)) toks.push_back(t);

    LinearProgram lp;
    std::map<std::string, int> var_index;
    auto var_of = [&](const std::string& name) {
        auto it = var_index.find(name);
        if (it != var_index.end()) return it->second;
        int j = lp.add_variable(0.0, 0.0, kInf, name);
        var_index.emplace(name, j);
        return j;
    };

    std::size_t i = 0;
    auto is_section = [&](const std::string& w) {
        std::string lw = lowercase(w);
        return lw == "minimize" || lw == "maximize" || lw == "min" || lw == "max" ||
               lw == "subject" || lw == "st" || lw == "s.t." || lw == "bounds" || lw == "end";
    };

    if (i >= toks.size() || toks[i].kind != Token::word)
        throw std::invalid_argument("LP text must start with Minimize or Maximize");
    {
        std::string lw = lowercase(toks[i].text);
        if (lw == "minimize" || lw == "min") lp.sense = Sense::minimize;
        else if (lw == "maximize" || lw == "max") lp.sense = Sense::maximize;
        else throw std::invalid_argument("LP text must start with Minimize or Maximize");
        ++i;
    }

    // Linear expression: [name:] (sign? coef? var)* ending at a relation or
    // section keyword. Returns the terms; label handled by the caller.
    struct Expr {
        std::vector<std::pair<int, double>> terms;
    };
    auto parse_expr = [&](std::size_t& p) {
        Expr e;
        // optional label
        if (p + 1 < toks.size() && toks[p].kind == Token::word && toks[p + 1].kind == Token::colon &&
            !is_section(toks[p].text))
            p += 2;
        for (;;) {
            if (p >= toks.size()) break;
            if (toks[p].kind == Token::rel_le || toks[p].kind == Token::rel_ge ||
                toks[p].kind == Token::rel_eq)
                break;
            if (toks[p].kind == Token::word && is_section(toks[p].text)) break;
            double sign = 1.0;
            while (p < toks.size() && (toks[p].kind == Token::plus || toks[p].kind == Token::minus)) {
                if (toks[p].kind == Token::minus) sign = -sign;
                ++p;
            }
            if (p >= toks.size()) throw std::invalid_argument("dangling sign in LP text");
            double coef = 1.0;
            if (toks[p].kind == Token::number) {
                coef = toks[p].value;
                ++p;
            }
            if (p < toks.size() && toks[p].kind == Token::word && !is_section(toks[p].text)) {
                e.terms.emplace_back(var_of(toks[p].text), sign * coef);
                ++p;
            } else {
                throw std::invalid_argument("expected variable name in LP expression");
            }
        }
        return e;
    };

    Expr obj = parse_expr(i);
    for (auto [j, v] : obj.terms) lp.add_objective_coeff(j, v); // accumulate duplicates

    if (i < toks.size() && toks[i].kind == Token::word) {
        std::string lw = lowercase(toks[i].text);
        if (lw == "subject") {
            ++i;
            if (i < toks.size() && toks[i].kind == Token::word && lowercase(toks[i].text) == "to")
                ++i;
        } else if (lw == "st" || lw == "s.t.") {
            ++i;
        } else if (lw != "bounds" && lw != "end") {
            throw std::invalid_argument("expected Subject To section");
        }
    } else if (i < toks.size()) {
        throw std::invalid_argument("expected Subject To section");
    }

    while (i < toks.size() && !(toks[i].kind == Token::word &&
                                (lowercase(toks[i].text) == "bounds" || lowercase(toks[i].text) == "end"))) {
        Expr lhs = parse_expr(i);
        if (i >= toks.size()) throw std::invalid_argument("constraint missing relation");
        Relation rel;
        if (toks[i].kind == Token::rel_le) rel = Relation::le;
        else if (toks[i].kind == Token::rel_ge) rel = Relation::ge;
        else if (toks[i].kind == Token::rel_eq) rel = Relation::eq;
        else throw std::invalid_argument("constraint missing relation");
        ++i;
        double sign = 1.0;
        while (i < toks.size() && (toks[i].kind == Token::plus || toks[i].kind == Token::minus)) {
            if (toks[i].kind == Token::minus) sign = -sign;
            ++i;
        }
        if (i >= toks.size() || toks[i].kind != Token::number)
            throw std::invalid_argument("constraint missing rhs");
        double rhs = sign * toks[i].value;
        ++i;
        lp.add_constraint(std::move(lhs.terms), rel, rhs);
    }

    if (i < toks.size() && lowercase(toks[i].text) == "bounds") {
        ++i;
        while (i < toks.size() && !(toks[i].kind == Token::word && lowercase(toks[i].text) == "end")) {
            // forms: "v free" | "lo <= v <= hi" | "v <= hi" | "v >= lo"
            if (toks[i].kind == Token::word && i + 1 < toks.size() &&
                toks[i + 1].kind == Token::word && lowercase(toks[i + 1].text) == "free") {
                lp.set_bounds(var_of(toks[i].text), -kInf, kInf);
                i += 2;
                continue;
            }
            double sign = 1.0;
            std::size_t save = i;
            while (i < toks.size() && (toks[i].kind == Token::plus || toks[i].kind == Token::minus)) {
                if (toks[i].kind == Token::minus) sign = -sign;
                ++i;
            }
            if (i < toks.size() && toks[i].kind == Token::number) {
                double lo = sign * toks[i].value;
                ++i;
                if (i >= toks.size() || toks[i].kind != Token::rel_le)
                    throw std::invalid_argument("malformed bound line");
                ++i;
                if (i >= toks.size() || toks[i].kind != Token::word)
                    throw std::invalid_argument("malformed bound line");
                int j = var_of(toks[i].text);
                ++i;
                double hi = lp.upper()[j];
                if (i < toks.size() && toks[i].kind == Token::rel_le) {
                    ++i;
                    double s2 = 1.0;
                    while (i < toks.size() &&
                           (toks[i].kind == Token::plus || toks[i].kind == Token::minus)) {
                        if (toks[i].kind == Token::minus) s2 = -s2;
                        ++i;
                    }
                    if (i >= toks.size() || toks[i].kind != Token::number)
                        throw std::invalid_argument("malformed bound line");
                    hi = s2 * toks[i].value;
                    ++i;
                }
                lp.set_bounds(j, lo, hi);
                continue;
            }
            i = save;
            if (toks[i].kind == Token::word) {
                int j = var_of(toks[i].text);
                ++i;
                if (i >= toks.size()) throw std::invalid_argument("malformed bound line");
                bool is_le = toks[i].kind == Token::rel_le;
                bool is_ge = toks[i].kind == Token::rel_ge;
                bool is_eq = toks[i].kind == Token::rel_eq;
                if (!is_le && !is_ge && !is_eq)
                    throw std::invalid_argument("malformed bound line");
                ++i;
                double s2 = 1.0;
                while (i < toks.size() && (toks[i].kind == Token::plus || toks[i].kind == Token::minus)) {
                    if (toks[i].kind == Token::minus) s2 = -s2;
                    ++i;
                }
                if (i >= toks.size() || toks[i].kind != Token::number)
                    throw std::invalid_argument("malformed bound line");
                double v = s2 * toks[i].value;
                ++i;
                if (is_le) lp.set_bounds(j, lp.lower()[j], v);
                else if (is_ge) lp.set_bounds(j, v, lp.upper()[j]);
                else lp.set_bounds(j, v, v);
                continue;
            }
            throw std::invalid_argument("malformed bounds section");
        }
    }
    lp.validate();
    return lp;
}

std::vector<double> read_solution_csv(std::istream& in) {
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string cur;
        auto flush = [&]() {
            // trim
            std::size_t a = cur.find_first_not_of(" \t\r");
            if (a == std::string::npos) { cur.clear(); return; }
            std::size_t b = cur.find_last_not_of(" \t\r");
            std::string f = cur.substr(a, b - a + 1);
            cur.clear();
            if (f.empty()) return;
            double v = 0.0;
            auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                throw std::invalid_argument("bad value in solution CSV: '" + f + "'");
            out.push_back(v);
        };
        for (char c : line) {
            if (c == ',') flush();
            else cur += c;
        }
        flush();
    }
    return out;
}

SolutionCheck check_external_solution(const LinearProgram& lp, const std::vector<double>& x,
                                      double tol) {
    if (static_cast<int>(x.size()) != lp.num_vars())
        throw std::invalid_argument("solution vector length does not match variable count");
    SolutionCheck sc;
    sc.objective = lp.objective_value(x);
    sc.residual = feasibility_residual(lp, x);
    sc.feasible = sc.residual <= tol;
    return sc;
}

} // namespace medoidlp
