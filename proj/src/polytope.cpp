#include "sbmgof/polytope.hpp"

#include <numeric>

#include <nlohmann/json.hpp>

#include "sbmgof/errors.hpp"

namespace sbmgof {

namespace {

long pairs_of(long n) { return n * (n - 1) / 2; }

void check_sizes(const std::vector<int>& block_sizes) {
    for (int s : block_sizes)
        if (s < 0) throw DataError("block sizes must be nonnegative");
}

// Classify a single coordinate against its box bounds [0, cap].
void classify_box(std::vector<ActiveConstraint>& out, int i, int j, long v, long cap) {
    auto push = [&](bool upper, long rhs, bool violated) {
        ActiveConstraint c;
        c.block_i = i;
        c.block_j = j;
        c.upper = upper;
        c.lhs = v;
        c.rhs = rhs;
        c.violated = violated;
        out.push_back(std::move(c));
    };
    if (v < 0)
        push(false, 0, true);
    else if (v == 0)
        push(false, 0, false);
    if (v > cap)
        push(true, cap, true);
    else if (v == cap && v > 0) // cap == 0 already reported as the lower bound
        push(true, cap, false);
}

Verdict settle(const std::vector<ActiveConstraint>& constraints) {
    for (const auto& c : constraints)
        if (c.violated) return Verdict::Outside;
    return constraints.empty() ? Verdict::Interior : Verdict::Boundary;
}

} // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Interior: return "interior";
    case Verdict::Boundary: return "boundary";
    case Verdict::Outside: return "outside";
    }
    throw Error("unreachable");
}

MembershipVerdict er_membership(const SufficientStatistics& t,
                                const std::vector<int>& block_sizes) {
    if (t.model != Model::ErSbm)
        throw DataError("er_membership expects an ErSbm statistic");
    check_sizes(block_sizes);
    const int k = static_cast<int>(block_sizes.size());
    if (static_cast<int>(t.values.size()) != num_block_pairs(k))
        throw DataError("statistic has " + std::to_string(t.values.size()) +
                        " coordinates, expected " + std::to_string(num_block_pairs(k)) +
                        " for k=" + std::to_string(k));

    MembershipVerdict out;
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            const long cap = i == j ? pairs_of(block_sizes[i])
                                    : static_cast<long>(block_sizes[i]) * block_sizes[j];
            classify_box(out.constraints, i, j, t.values[block_pair_index(k, i, j)], cap);
        }
    }
    out.verdict = settle(out.constraints);
    return out;
}

MembershipVerdict add_membership(const SufficientStatistics& t,
                                 const std::vector<int>& block_sizes) {
    if (t.model != Model::AddSbm)
        throw DataError("add_membership expects an AddSbm statistic");
    check_sizes(block_sizes);
    const int k = static_cast<int>(block_sizes.size());
    if (static_cast<int>(t.values.size()) != k)
        throw DataError("statistic has " + std::to_string(t.values.size()) +
                        " coordinates, expected k=" + std::to_string(k));
    if (k > 12)
        throw DataError("halfspace check enumerates 3^k constraints; k=" +
                        std::to_string(k) + " exceeds the supported k <= 12");

    const long total = std::accumulate(t.values.begin(), t.values.end(), 0L);

    MembershipVerdict out;
    out.lattice_parity_ok = total % 2 == 0;

    long n_all = 0;
    for (int s : block_sizes) n_all += s;

    // Walk all 3^k - 1 sign patterns: digit 1 puts a block in T (+1), digit 2
    // in S (-1), digit 0 leaves it out.
    long patterns = 1;
    for (int i = 0; i < k; ++i) patterns *= 3;
    std::vector<int> digit(k, 0);
    for (long code = 1; code < patterns; ++code) {
        int pos = 0;
        while (digit[pos] == 2) digit[pos++] = 0;
        ++digit[pos];

        long lhs = 0, n_T = 0, n_S = 0;
        for (int i = 0; i < k; ++i) {
            if (digit[i] == 1) {
                lhs += t.values[i];
                n_T += block_sizes[i];
            } else if (digit[i] == 2) {
                lhs -= t.values[i];
                n_S += block_sizes[i];
            }
        }
        const long rhs = n_T * (n_T - 1) + n_T * (n_all - n_T - n_S);
        if (lhs < rhs) continue;

        ActiveConstraint c;
        for (int i = 0; i < k; ++i) {
            if (digit[i] == 1) c.T.push_back(i);
            else if (digit[i] == 2) c.S.push_back(i);
        }
        c.lhs = lhs;
        c.rhs = rhs;
        c.violated = lhs > rhs;
        out.constraints.push_back(std::move(c));
    }
    out.verdict = settle(out.constraints);
    return out;
}

std::pair<bool, MembershipVerdict> mle_exists(Model m, const Graph& g,
                                              const BlockAssignment& z) {
    check_same_nodes(g, z);
    std::vector<int> sizes(z.k());
    for (int b = 0; b < z.k(); ++b) sizes[b] = z.size(b);

    MembershipVerdict v;
    switch (m) {
    case Model::ErSbm:
        v = er_membership(t_er(g, z), sizes);
        break;
    case Model::AddSbm:
        v = add_membership(t_add(g, z), sizes);
        break;
    case Model::BetaSbm:
        throw DataError("no polytope check for the degree-parameter model; "
                        "probe mle_beta for divergence instead");
    }
    const bool exists = v.verdict == Verdict::Interior;
    return {exists, std::move(v)};
}

std::string verdict_to_json(const MembershipVerdict& v) {
    nlohmann::json j;
    j["verdict"] = verdict_name(v.verdict);
    j["lattice_parity_ok"] = v.lattice_parity_ok;
    j["constraints"] = nlohmann::json::array();
    for (const auto& c : v.constraints) {
        nlohmann::json e;
        if (c.block_i >= 0) {
            e["block_i"] = c.block_i + 1;
            e["block_j"] = c.block_j + 1;
        } else {
            auto up = [](const std::vector<int>& xs) {
                std::vector<int> ys;
                ys.reserve(xs.size());
                for (int x : xs) ys.push_back(x + 1);
                return ys;
            };
            e["T"] = up(c.T);
            e["S"] = up(c.S);
        }
        e["side"] = c.upper ? "upper" : "lower";
        e["lhs"] = c.lhs;
        e["rhs"] = c.rhs;
        e["violated"] = c.violated;
        j["constraints"].push_back(std::move(e));
    }
    return j.dump();
}

} // namespace sbmgof
