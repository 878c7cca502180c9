#include <sbmgof/moves.hpp>

#include <algorithm>
#include <array>

#include <json.hpp>

#include <sbmgof/errors.hpp>

namespace sbmgof {

void Move::normalize() {
    auto fix = [](std::vector<std::pair<int, int>>& side) {
        for (auto& [u, v] : side) {
            if (u == v) throw DataError("move contains a loop dyad");
            if (u > v) std::swap(u, v);
        }
        std::sort(side.begin(), side.end());
        if (std::adjacent_find(side.begin(), side.end()) != side.end()) {
            throw DataError("move contains a duplicate dyad");
        }
    };
    fix(add);
    fix(remove);
    std::vector<std::pair<int, int>> both;
    std::set_intersection(add.begin(), add.end(), remove.begin(), remove.end(),
                          std::back_inserter(both));
    if (!both.empty()) throw DataError("move adds and removes the same dyad");
}

namespace {

std::pair<int, int> norm_dyad(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

long class_dyad_count(const BlockAssignment& z, int i, int j) {
    if (i == j) {
        const long s = z.size(i);
        return s * (s - 1) / 2;
    }
    return static_cast<long>(z.size(i)) * z.size(j);
}

int uniform_node(int n, Rng& rng) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

// Linear swap inside a uniformly chosen dyad-bearing class; shared by the
// homogeneous and additive proposal mixtures.
std::optional<Move> propose_linear(const Graph& g, const BlockAssignment& z, Rng& rng) {
    std::vector<std::pair<int, int>> classes;
    for (int i = 0; i < z.k(); ++i) {
        for (int j = i; j < z.k(); ++j) {
            if (class_dyad_count(z, i, j) > 0) classes.emplace_back(i, j);
        }
    }
    if (classes.empty()) return std::nullopt;
    const auto [ci, cj] =
        classes[std::uniform_int_distribution<std::size_t>(0, classes.size() - 1)(rng)];

    std::vector<std::pair<int, int>> present, absent;
    auto visit = [&](int u, int v) {
        (g.has_edge(u, v) ? present : absent).push_back(norm_dyad(u, v));
    };
    if (ci == cj) {
        const auto& m = z.members(ci);
        for (std::size_t a = 0; a < m.size(); ++a) {
            for (std::size_t b = a + 1; b < m.size(); ++b) visit(m[a], m[b]);
        }
    } else {
        for (int u : z.members(ci)) {
            for (int v : z.members(cj)) visit(u, v);
        }
    }
    if (present.empty() || absent.empty()) return std::nullopt;
    Move m;
    m.remove = {present[std::uniform_int_distribution<std::size_t>(0, present.size() - 1)(rng)]};
    m.add = {absent[std::uniform_int_distribution<std::size_t>(0, absent.size() - 1)(rng)]};
    return m;
}

// Alternating 4-cycle u-v-y-w on i.i.d. node draws: {u,v},{y,w} present,
// {v,y},{w,u} absent.  Validity forces the four nodes to be distinct.  The
// class-label multiset condition is only requested by the degree-and-block
// preserving model.
std::optional<Move> propose_quadratic(const Graph& g, const BlockAssignment& z, Rng& rng,
                                      bool match_classes) {
    const int n = g.n();
    const int u = uniform_node(n, rng), v = uniform_node(n, rng);
    const int y = uniform_node(n, rng), w = uniform_node(n, rng);
    const std::array<int, 4> nodes = {u, v, y, w};
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            if (nodes[a] == nodes[b]) return std::nullopt;
        }
    }
    if (!g.has_edge(u, v) || !g.has_edge(y, w)) return std::nullopt;
    if (g.has_edge(v, y) || g.has_edge(w, u)) return std::nullopt;
    if (match_classes) {
        auto cls = [&](int a, int b) {
            return block_pair_index(z.k(), std::min(z.block_of(a), z.block_of(b)),
                                    std::max(z.block_of(a), z.block_of(b)));
        };
        std::array<long, 2> out = {cls(u, v), cls(y, w)};
        std::array<long, 2> in = {cls(v, y), cls(w, u)};
        std::sort(out.begin(), out.end());
        std::sort(in.begin(), in.end());
        if (out != in) return std::nullopt;
    }
    Move m;
    m.remove = {norm_dyad(u, v), norm_dyad(y, w)};
    m.add = {norm_dyad(v, y), norm_dyad(w, u)};
    m.normalize();
    return m;
}

// Alternating closed 6-walk u0..u5 on i.i.d. node draws: dyads
// (u0,u1),(u2,u3),(u4,u5) present, (u1,u2),(u3,u4),(u5,u0) absent, all six
// distinct; nodes may repeat (the walk need not be a cycle).
std::optional<Move> propose_cubic(const Graph& g, const BlockAssignment& z, Rng& rng) {
    const int n = g.n();
    std::array<int, 6> u;
    for (int& x : u) x = uniform_node(n, rng);
    std::array<long, 6> dyads;
    for (int i = 0; i < 6; ++i) {
        const int a = u[i], b = u[(i + 1) % 6];
        if (a == b) return std::nullopt;
        dyads[i] = Graph::dyad_index(n, a, b);
    }
    for (int a = 0; a < 6; ++a) {
        for (int b = a + 1; b < 6; ++b) {
            if (dyads[a] == dyads[b]) return std::nullopt;
        }
    }
    for (int i = 0; i < 6; ++i) {
        const bool want_present = (i % 2 == 0);
        if (g.dyad_value(dyads[i]) != want_present) return std::nullopt;
    }
    auto cls = [&](int i) {
        const int a = z.block_of(u[i]), b = z.block_of(u[(i + 1) % 6]);
        return block_pair_index(z.k(), std::min(a, b), std::max(a, b));
    };
    std::array<long, 3> out = {cls(0), cls(2), cls(4)};
    std::array<long, 3> in = {cls(1), cls(3), cls(5)};
    std::sort(out.begin(), out.end());
    std::sort(in.begin(), in.end());
    if (out != in) return std::nullopt;

    Move m;
    for (int i = 0; i < 6; ++i) {
        const auto d = norm_dyad(u[i], u[(i + 1) % 6]);
        (i % 2 == 0 ? m.remove : m.add).push_back(d);
    }
    m.normalize();
    return m;
}

}  // namespace

std::optional<Move> propose_er(const Graph& g, const BlockAssignment& z, Rng& rng) {
    check_same_nodes(g, z);
    return propose_linear(g, z, rng);
}

std::optional<Move> propose_add(const Graph& g, const BlockAssignment& z, Rng& rng) {
    check_same_nodes(g, z);
    if (std::bernoulli_distribution(0.5)(rng)) return propose_linear(g, z, rng);
    return propose_quadratic(g, z, rng, /*match_classes=*/false);
}

std::optional<Move> propose_beta(const Graph& g, const BlockAssignment& z, Rng& rng) {
    check_same_nodes(g, z);
    if (std::bernoulli_distribution(0.5)(rng)) {
        return propose_quadratic(g, z, rng, /*match_classes=*/true);
    }
    return propose_cubic(g, z, rng);
}

Graph apply_move(const Graph& g, const Move& move) {
    Graph h = g;
    for (const auto& [u, v] : move.remove) {
        if (!h.has_edge(u, v)) throw DataError("move removes an absent dyad");
        h.set_edge(u, v, false);
    }
    for (const auto& [u, v] : move.add) {
        if (h.has_edge(u, v)) throw DataError("move adds a present dyad");
        h.set_edge(u, v, true);
    }
    return h;
}

bool validate_move(const Move& move, const Graph& g, const BlockAssignment& z, Model model) {
    check_same_nodes(g, z);
    Move m = move;
    try {
        m.normalize();
        for (const auto& [u, v] : m.add) {
            if (u < 0 || v >= g.n()) return false;
        }
        for (const auto& [u, v] : m.remove) {
            if (u < 0 || v >= g.n()) return false;
        }
        const Graph h = apply_move(g, m);
        return sufficient_statistic(model, g, z) == sufficient_statistic(model, h, z);
    } catch (const DataError&) {
        return false;
    }
}

std::string move_to_json(const Move& move) {
    nlohmann::json j;
    j["add"] = nlohmann::json::array();
    j["remove"] = nlohmann::json::array();
    for (const auto& [u, v] : move.add) j["add"].push_back({u + 1, v + 1});
    for (const auto& [u, v] : move.remove) j["remove"].push_back({u + 1, v + 1});
    return j.dump();
}

Move move_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid move JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("add") || !j.contains("remove")) {
        throw DataError("move JSON must contain add and remove arrays");
    }
    Move m;
    auto read_side = [&](const nlohmann::json& arr, std::vector<std::pair<int, int>>& side) {
        if (!arr.is_array()) throw DataError("move JSON sides must be arrays of pairs");
        for (const auto& e : arr) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
                !e[1].is_number_integer()) {
                throw DataError("move JSON dyads must be integer pairs");
            }
            const int u = e[0].get<int>(), v = e[1].get<int>();
            if (u < 1 || v < 1) throw DataError("move JSON nodes are 1-based");
            side.emplace_back(u - 1, v - 1);
        }
    };
    read_side(j["add"], m.add);
    read_side(j["remove"], m.remove);
    m.normalize();
    return m;
}

}  // namespace sbmgof
