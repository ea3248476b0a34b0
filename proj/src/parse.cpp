#include "ubamc/parse.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ubamc/errors.hpp"

namespace ubamc {

namespace {

struct Token {
    std::string text;
    int column;  // 1-based start column
};

struct Line {
    int number = 0;  // 1-based
    std::vector<Token> tokens;
};

// Splits into whitespace-separated tokens per line, stripping # comments.
// Blank lines are dropped.
std::vector<Line> tokenize(const std::string& text) {
    std::vector<Line> lines;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string raw = text.substr(
            pos, eol == std::string::npos ? std::string::npos : eol - pos);
        ++line_no;
        Line line;
        line.number = line_no;
        std::size_t i = 0;
        while (i < raw.size()) {
            if (std::isspace(static_cast<unsigned char>(raw[i]))) {
                ++i;
                continue;
            }
            if (raw[i] == '#') break;
            std::size_t start = i;
            while (i < raw.size() &&
                   !std::isspace(static_cast<unsigned char>(raw[i])) &&
                   raw[i] != '#')
                ++i;
            line.tokens.push_back(
                {raw.substr(start, i - start), static_cast<int>(start) + 1});
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return lines;
}

Rational parse_probability(const Token& tok, int line_no) {
    const std::string& s = tok.text;
    bool ok = !s.empty();
    std::size_t slash = s.find('/');
    if (ok && slash == std::string::npos) {
        // Bare integers are restricted to 0 and 1; anything else is either
        // out of range or a disallowed spelling of a fraction.
        ok = (s == "0" || s == "1");
    } else if (ok) {
        ok = slash > 0 && slash + 1 < s.size();
        for (std::size_t i = 0; ok && i < s.size(); ++i)
            if (i != slash && !std::isdigit(static_cast<unsigned char>(s[i])))
                ok = false;
    }
    if (!ok)
        throw ParseError("expected probability 'p/q' or '0' or '1', got '" + s +
                             "'",
                         line_no, tok.column);
    Rational value = Rational::parse(s);
    if (!value.in_unit_interval())
        throw ParseError("probability " + s + " outside [0,1]", line_no,
                         tok.column);
    return value;
}

[[noreturn]] void unknown_state(const Token& tok, int line_no) {
    throw ParseError("unknown state '" + tok.text + "'", line_no, tok.column);
}

}  // namespace

MarkovChain parse_markov_chain(const std::string& text) {
    auto lines = tokenize(text);
    if (lines.empty()) throw ParseError("empty document", 1, 1);
    if (lines[0].tokens[0].text != "@mc")
        throw ParseError("expected '@mc' header", lines[0].number,
                         lines[0].tokens[0].column);
    if (lines[0].tokens.size() != 1)
        throw ParseError("unexpected token after '@mc'", lines[0].number,
                         lines[0].tokens[1].column);

    MarkovChain m;
    std::unordered_map<std::string, int> index;
    std::vector<int> state_decl_line;
    std::set<std::pair<int, int>> seen_trans;
    std::vector<bool> seen_init, seen_label;
    bool any_label = false;

    auto lookup = [&](const Token& tok, int line_no) {
        auto it = index.find(tok.text);
        if (it == index.end()) unknown_state(tok, line_no);
        return it->second;
    };
    auto grow = [&]() {
        int n = static_cast<int>(m.states.size());
        m.init.assign(n, Rational());
        for (auto& row : m.trans) row.resize(n, Rational());
        m.trans.resize(n, std::vector<Rational>(n, Rational()));
        seen_init.resize(n, false);
        seen_label.resize(n, false);
        if (m.labels) m.labels->resize(n);
    };

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line& line = lines[li];
        const std::string& kw = line.tokens[0].text;
        if (kw == "states") {
            if (line.tokens.size() < 2)
                throw ParseError("'states' line declares no states", line.number,
                                 line.tokens[0].column);
            for (std::size_t t = 1; t < line.tokens.size(); ++t) {
                const Token& tok = line.tokens[t];
                if (!index.emplace(tok.text, m.states.size()).second)
                    throw ParseError("duplicate state '" + tok.text + "'",
                                     line.number, tok.column);
                m.states.push_back(tok.text);
                state_decl_line.push_back(line.number);
            }
            grow();
        } else if (kw == "init") {
            if (line.tokens.size() != 3)
                throw ParseError("'init' line takes a state and a probability",
                                 line.number, line.tokens[0].column);
            int s = lookup(line.tokens[1], line.number);
            if (seen_init[s])
                throw ParseError("duplicate init entry for state '" +
                                     line.tokens[1].text + "'",
                                 line.number, line.tokens[1].column);
            seen_init[s] = true;
            m.init[s] = parse_probability(line.tokens[2], line.number);
        } else if (kw == "trans") {
            if (line.tokens.size() != 4)
                throw ParseError(
                    "'trans' line takes two states and a probability",
                    line.number, line.tokens[0].column);
            int s = lookup(line.tokens[1], line.number);
            int t = lookup(line.tokens[2], line.number);
            if (!seen_trans.emplace(s, t).second)
                throw ParseError("duplicate transition " + line.tokens[1].text +
                                     " -> " + line.tokens[2].text,
                                 line.number, line.tokens[1].column);
            m.trans[s][t] = parse_probability(line.tokens[3], line.number);
        } else if (kw == "label") {
            if (line.tokens.size() != 3)
                throw ParseError("'label' line takes a state and a letter",
                                 line.number, line.tokens[0].column);
            int s = lookup(line.tokens[1], line.number);
            if (!m.labels) {
                m.labels.emplace(m.states.size());
                any_label = true;
            }
            if (seen_label[s])
                throw ParseError("duplicate label for state '" +
                                     line.tokens[1].text + "'",
                                 line.number, line.tokens[1].column);
            seen_label[s] = true;
            (*m.labels)[s] = line.tokens[2].text;
        } else {
            throw ParseError("unknown directive '" + kw + "'", line.number,
                             line.tokens[0].column);
        }
    }

    if (m.states.empty())
        throw ParseError("no states declared", lines[0].number, 1);
    if (any_label)
        for (int s = 0; s < m.size(); ++s)
            if (!seen_label[s])
                throw ParseError("state '" + m.states[s] +
                                     "' is unlabeled while others are labeled",
                                 state_decl_line[s], 1);

    // Stochasticity checks, reported against the declaring line so the
    // message points somewhere useful in the document.
    Rational init_sum;
    for (const auto& p : m.init) init_sum += p;
    if (!init_sum.is_one())
        throw ParseError("initial distribution sums to " +
                             init_sum.fraction_str() + ", expected 1",
                         state_decl_line.empty() ? 1 : state_decl_line[0], 1);
    for (int s = 0; s < m.size(); ++s) {
        Rational row_sum;
        for (const auto& p : m.trans[s]) row_sum += p;
        if (!row_sum.is_one())
            throw ParseError("transition row for state '" + m.states[s] +
                                 "' sums to " + row_sum.fraction_str() +
                                 ", expected 1",
                             state_decl_line[s], 1);
    }
    validate_markov_chain(m);
    return m;
}

Automaton parse_automaton(const std::string& text) {
    auto lines = tokenize(text);
    if (lines.empty()) throw ParseError("empty document", 1, 1);
    if (lines[0].tokens[0].text != "@automaton")
        throw ParseError("expected '@automaton' header", lines[0].number,
                         lines[0].tokens[0].column);
    if (lines[0].tokens.size() != 2)
        throw ParseError("'@automaton' header takes a mode: nfa or nba",
                         lines[0].number, lines[0].tokens[0].column);
    Automaton a;
    const std::string& mode = lines[0].tokens[1].text;
    if (mode == "nfa")
        a.mode = AcceptanceMode::finite;
    else if (mode == "nba")
        a.mode = AcceptanceMode::buchi;
    else
        throw ParseError("unknown mode '" + mode + "', expected nfa or nba",
                         lines[0].number, lines[0].tokens[1].column);

    std::unordered_map<std::string, int> state_index, letter_index;
    auto state_of = [&](const Token& tok, int line_no) {
        auto it = state_index.find(tok.text);
        if (it == state_index.end()) unknown_state(tok, line_no);
        return it->second;
    };
    auto letter_of = [&](const Token& tok, int line_no) {
        auto it = letter_index.find(tok.text);
        if (it == letter_index.end())
            throw ParseError("unknown letter '" + tok.text + "'", line_no,
                             tok.column);
        return it->second;
    };

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line& line = lines[li];
        const std::string& kw = line.tokens[0].text;
        if (kw == "alphabet") {
            for (std::size_t t = 1; t < line.tokens.size(); ++t) {
                const Token& tok = line.tokens[t];
                if (!letter_index.emplace(tok.text, a.alphabet.size()).second)
                    throw ParseError("duplicate letter '" + tok.text + "'",
                                     line.number, tok.column);
                a.alphabet.push_back(tok.text);
            }
        } else if (kw == "states") {
            for (std::size_t t = 1; t < line.tokens.size(); ++t) {
                const Token& tok = line.tokens[t];
                if (!state_index.emplace(tok.text, a.states.size()).second)
                    throw ParseError("duplicate state '" + tok.text + "'",
                                     line.number, tok.column);
                a.states.push_back(tok.text);
            }
            a.initial.resize(a.states.size(), false);
            a.accepting.resize(a.states.size(), false);
            a.delta.resize(a.states.size());
            for (auto& row : a.delta) row.resize(a.alphabet.size());
        } else if (kw == "initial") {
            for (std::size_t t = 1; t < line.tokens.size(); ++t)
                a.initial[state_of(line.tokens[t], line.number)] = true;
        } else if (kw == "accepting") {
            for (std::size_t t = 1; t < line.tokens.size(); ++t)
                a.accepting[state_of(line.tokens[t], line.number)] = true;
        } else if (kw == "trans") {
            if (line.tokens.size() != 4)
                throw ParseError(
                    "'trans' line takes source, letter and target",
                    line.number, line.tokens[0].column);
            int q = state_of(line.tokens[1], line.number);
            int l = letter_of(line.tokens[2], line.number);
            int p = state_of(line.tokens[3], line.number);
            if (a.delta[q].size() != a.alphabet.size())
                for (auto& row : a.delta) row.resize(a.alphabet.size());
            a.add_transition(q, l, p);  // relation: duplicates collapse
        } else {
            throw ParseError("unknown directive '" + kw + "'", line.number,
                             line.tokens[0].column);
        }
    }
    if (a.alphabet.empty())
        throw ParseError("no alphabet declared", lines[0].number, 1);
    if (a.states.empty())
        throw ParseError("no states declared", lines[0].number, 1);
    for (auto& row : a.delta) row.resize(a.alphabet.size());
    validate_automaton(a);
    return a;
}

std::string serialize_markov_chain(const MarkovChain& m) {
    std::ostringstream out;
    out << "@mc\n";
    out << "states";
    for (const auto& s : m.states) out << ' ' << s;
    out << '\n';
    for (int s = 0; s < m.size(); ++s)
        if (!m.init[s].is_zero())
            out << "init " << m.states[s] << ' ' << m.init[s].compact_str()
                << '\n';
    for (int s = 0; s < m.size(); ++s)
        for (int t = 0; t < m.size(); ++t)
            if (!m.trans[s][t].is_zero())
                out << "trans " << m.states[s] << ' ' << m.states[t] << ' '
                    << m.trans[s][t].compact_str() << '\n';
    if (m.labels)
        for (int s = 0; s < m.size(); ++s)
            out << "label " << m.states[s] << ' ' << (*m.labels)[s] << '\n';
    return out.str();
}

std::string serialize_automaton(const Automaton& a) {
    std::ostringstream out;
    out << "@automaton "
        << (a.mode == AcceptanceMode::finite ? "nfa" : "nba") << '\n';
    out << "alphabet";
    for (const auto& l : a.alphabet) out << ' ' << l;
    out << '\n';
    out << "states";
    for (const auto& s : a.states) out << ' ' << s;
    out << '\n';
    auto mask_line = [&](const char* kw, const std::vector<bool>& mask) {
        bool any = false;
        for (bool b : mask) any = any || b;
        if (!any) return;
        out << kw;
        for (int q = 0; q < a.num_states(); ++q)
            if (mask[q]) out << ' ' << a.states[q];
        out << '\n';
    };
    mask_line("initial", a.initial);
    mask_line("accepting", a.accepting);
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.num_letters(); ++l)
            for (int t : a.delta[q][l])
                out << "trans " << a.states[q] << ' ' << a.alphabet[l] << ' '
                    << a.states[t] << '\n';
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace ubamc
