#include "ubamc/model.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "ubamc/errors.hpp"

namespace ubamc {

int MarkovChain::index_of(const std::string& state) const {
    for (int i = 0; i < size(); ++i)
        if (states[i] == state) return i;
    return -1;
}

void validate_markov_chain(const MarkovChain& m) {
    const int n = m.size();
    if (n == 0) throw PreconditionError("markov chain has no states");
    {
        std::unordered_map<std::string, int> seen;
        for (int i = 0; i < n; ++i) {
            auto [it, fresh] = seen.emplace(m.states[i], i);
            if (!fresh)
                throw PreconditionError("duplicate state name '" + m.states[i] + "'");
        }
    }
    if (static_cast<int>(m.init.size()) != n)
        throw PreconditionError("initial distribution has wrong dimension");
    if (static_cast<int>(m.trans.size()) != n)
        throw PreconditionError("transition matrix has wrong row count");

    Rational init_sum;
    for (int i = 0; i < n; ++i) {
        if (m.init[i].sign() < 0)
            throw PreconditionError("negative initial probability at state '" +
                                    m.states[i] + "'");
        init_sum += m.init[i];
    }
    if (!init_sum.is_one())
        throw PreconditionError("initial distribution sums to " +
                                init_sum.fraction_str() + ", expected 1");

    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(m.trans[i].size()) != n)
            throw PreconditionError("transition row for state '" + m.states[i] +
                                    "' has wrong dimension");
        Rational row_sum;
        for (int j = 0; j < n; ++j) {
            if (m.trans[i][j].sign() < 0)
                throw PreconditionError("negative transition probability " +
                                        m.states[i] + " -> " + m.states[j]);
            row_sum += m.trans[i][j];
        }
        if (!row_sum.is_one())
            throw PreconditionError("transition row for state '" + m.states[i] +
                                    "' sums to " + row_sum.fraction_str() +
                                    ", expected 1");
    }

    if (m.labels) {
        if (static_cast<int>(m.labels->size()) != n)
            throw PreconditionError("label vector has wrong dimension");
        for (int i = 0; i < n; ++i)
            if ((*m.labels)[i].empty())
                throw PreconditionError("empty label on state '" + m.states[i] + "'");
    }
}

int Automaton::state_index(const std::string& name) const {
    for (int i = 0; i < num_states(); ++i)
        if (states[i] == name) return i;
    return -1;
}

int Automaton::letter_index(const std::string& name) const {
    for (int i = 0; i < num_letters(); ++i)
        if (alphabet[i] == name) return i;
    return -1;
}

std::vector<int> Automaton::initial_states() const {
    std::vector<int> out;
    for (int i = 0; i < num_states(); ++i)
        if (initial[i]) out.push_back(i);
    return out;
}

std::vector<int> Automaton::accepting_states() const {
    std::vector<int> out;
    for (int i = 0; i < num_states(); ++i)
        if (accepting[i]) out.push_back(i);
    return out;
}

std::size_t Automaton::num_transitions() const {
    std::size_t total = 0;
    for (const auto& row : delta)
        for (const auto& targets : row) total += targets.size();
    return total;
}

void Automaton::add_transition(int q, int letter, int target) {
    auto& targets = delta.at(q).at(letter);
    auto it = std::lower_bound(targets.begin(), targets.end(), target);
    if (it == targets.end() || *it != target) targets.insert(it, target);
}

void validate_automaton(const Automaton& a) {
    const int n = a.num_states();
    const int k = a.num_letters();
    if (k == 0) throw PreconditionError("automaton has empty alphabet");
    {
        std::unordered_map<std::string, int> seen;
        for (int i = 0; i < k; ++i)
            if (!seen.emplace(a.alphabet[i], i).second)
                throw PreconditionError("duplicate letter '" + a.alphabet[i] + "'");
    }
    {
        std::unordered_map<std::string, int> seen;
        for (int i = 0; i < n; ++i)
            if (!seen.emplace(a.states[i], i).second)
                throw PreconditionError("duplicate state name '" + a.states[i] + "'");
    }
    if (static_cast<int>(a.initial.size()) != n ||
        static_cast<int>(a.accepting.size()) != n)
        throw PreconditionError("initial/accepting masks have wrong dimension");
    if (static_cast<int>(a.delta.size()) != n)
        throw PreconditionError("transition table has wrong row count");
    for (int q = 0; q < n; ++q) {
        if (static_cast<int>(a.delta[q].size()) != k)
            throw PreconditionError("transition row for state '" + a.states[q] +
                                    "' has wrong letter count");
        for (int l = 0; l < k; ++l) {
            const auto& targets = a.delta[q][l];
            for (std::size_t i = 0; i < targets.size(); ++i) {
                if (targets[i] < 0 || targets[i] >= n)
                    throw PreconditionError("transition target out of range from '" +
                                            a.states[q] + "' on '" + a.alphabet[l] +
                                            "'");
                if (i > 0 && targets[i - 1] >= targets[i])
                    throw PreconditionError("transition targets not strictly sorted "
                                            "from '" + a.states[q] + "' on '" +
                                            a.alphabet[l] + "'");
            }
        }
    }
}

bool is_deterministic(const Automaton& a) {
    int init_count = 0;
    for (bool b : a.initial) init_count += b ? 1 : 0;
    if (init_count > 1) return false;
    for (const auto& row : a.delta)
        for (const auto& targets : row)
            if (targets.size() > 1) return false;
    return true;
}

bool is_complete(const Automaton& a) {
    if (a.initial_states().empty()) return false;
    for (const auto& row : a.delta)
        for (const auto& targets : row)
            if (targets.empty()) return false;
    return true;
}

std::vector<int> delta_hat(const Automaton& a, const std::vector<int>& subset,
                           const std::vector<int>& word) {
    std::vector<bool> current(a.num_states(), false);
    for (int q : subset) current.at(q) = true;
    std::vector<bool> next(a.num_states(), false);
    for (int letter : word) {
        std::fill(next.begin(), next.end(), false);
        for (int q = 0; q < a.num_states(); ++q) {
            if (!current[q]) continue;
            for (int t : a.delta[q].at(letter)) next[t] = true;
        }
        std::swap(current, next);
    }
    std::vector<int> out;
    for (int q = 0; q < a.num_states(); ++q)
        if (current[q]) out.push_back(q);
    return out;
}

std::vector<std::string> delta_hat(const Automaton& a,
                                   const std::vector<std::string>& subset,
                                   const std::vector<std::string>& word) {
    std::vector<int> start;
    for (const auto& name : subset) {
        int q = a.state_index(name);
        if (q < 0) throw PreconditionError("unknown state '" + name + "'");
        start.push_back(q);
    }
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    std::vector<int> letters;
    for (const auto& name : word) {
        int l = a.letter_index(name);
        if (l < 0) throw PreconditionError("letter '" + name + "' not in alphabet");
        letters.push_back(l);
    }
    std::vector<std::string> out;
    for (int q : delta_hat(a, start, letters)) out.push_back(a.states[q]);
    return out;
}

SizeMetrics size_metrics(const MarkovChain& m, const Automaton& a) {
    SizeMetrics sm;
    for (const auto& s : m.states) sm.mc_size += 8 * s.size();
    for (const auto& row : m.trans)
        for (const auto& p : row)
            if (!p.is_zero()) sm.mc_size += p.bit_size();
    for (const auto& p : m.init)
        if (!p.is_zero()) sm.mc_size += p.bit_size();
    if (m.labels)
        for (const auto& l : *m.labels) sm.mc_size += 8 * l.size();

    for (const auto& s : a.states) sm.aut_size += 8 * s.size();
    for (const auto& l : a.alphabet) sm.aut_size += 8 * l.size();
    // Each transition costs the bits of naming its endpoints and letter.
    std::uint64_t per_edge = std::bit_width(
        static_cast<std::uint64_t>(std::max(1, a.num_states())));
    std::uint64_t per_letter = std::bit_width(
        static_cast<std::uint64_t>(std::max(1, a.num_letters())));
    sm.aut_size += a.num_transitions() * (2 * per_edge + per_letter);
    sm.aut_size += static_cast<std::uint64_t>(a.num_states()) * 2;  // both masks
    return sm;
}

std::uint64_t subset_to_mask(const Automaton& a, const std::vector<int>& subset) {
    if (a.num_states() > 64)
        throw SizeLimitError("automaton exceeds 64 states; subset masks unavailable");
    std::uint64_t mask = 0;
    for (int q : subset) mask |= std::uint64_t{1} << q;
    return mask;
}

std::vector<int> mask_to_subset(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        int q = std::countr_zero(mask);
        out.push_back(q);
        mask &= mask - 1;
    }
    return out;
}

std::uint64_t initial_mask(const Automaton& a) {
    return subset_to_mask(a, a.initial_states());
}

std::uint64_t accepting_mask(const Automaton& a) {
    return subset_to_mask(a, a.accepting_states());
}

std::vector<std::vector<std::uint64_t>> mask_steps(const Automaton& a) {
    if (a.num_states() > 64)
        throw SizeLimitError("automaton exceeds 64 states; subset masks unavailable");
    std::vector<std::vector<std::uint64_t>> steps(
        a.num_letters(), std::vector<std::uint64_t>(a.num_states(), 0));
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.num_letters(); ++l)
            for (int t : a.delta[q][l])
                steps[l][q] |= std::uint64_t{1} << t;
    return steps;
}

std::uint64_t mask_step(const std::vector<std::vector<std::uint64_t>>& steps,
                        std::uint64_t subset, int letter) {
    std::uint64_t out = 0;
    const auto& row = steps.at(letter);
    while (subset) {
        int q = std::countr_zero(subset);
        out |= row[q];
        subset &= subset - 1;
    }
    return out;
}

}  // namespace ubamc
