#include "sbmgof/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sbmgof {

namespace {

// Strips comments/whitespace; returns false for lines with no content.
bool clean_line(std::string& line) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto is_space = [](unsigned char c) { return std::isspace(c); };
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    line.erase(0, start);
    return !line.empty();
}

} // namespace

Graph read_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int n = 0;
    bool n_given = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!clean_line(line)) continue;
        if (line.rfind("n=", 0) == 0) {
            try {
                n = std::stoi(line.substr(2));
            } catch (const std::exception&) {
                throw DataError("bad node count on line " + std::to_string(lineno) + ": " + line);
            }
            n_given = true;
            continue;
        }
        std::istringstream ss(line);
        long u = 0, v = 0;
        if (!(ss >> u >> v))
            throw DataError("expected 'u v' on line " + std::to_string(lineno) + ": " + line);
        std::string extra;
        if (ss >> extra)
            throw DataError("trailing tokens on line " + std::to_string(lineno) + ": " + line);
        if (u < 1 || v < 1)
            throw DataError("node labels are 1-based, got line " + std::to_string(lineno) + ": " +
                            line);
        edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
        if (n_given) {
            if (u > n || v > n)
                throw DataError("edge label exceeds declared n=" + std::to_string(n) +
                                " on line " + std::to_string(lineno));
        } else {
            n = std::max({n, static_cast<int>(u), static_cast<int>(v)});
        }
    }
    return Graph::from_edges(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list file: " + path);
    return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
    out << "n=" << g.n() << "\n";
    for (auto [u, v] : g.edges()) out << (u + 1) << " " << (v + 1) << "\n";
}

namespace {

BlockAssignment blocks_from_labels(std::vector<int> labels1, int k) {
    if (labels1.empty()) throw DataError("block file contains no labels");
    int max_label = *std::max_element(labels1.begin(), labels1.end());
    int min_label = *std::min_element(labels1.begin(), labels1.end());
    if (min_label < 1) throw DataError("block labels are 1-based");
    if (k == 0) k = max_label;
    if (max_label > k)
        throw DataError("block label " + std::to_string(max_label) + " exceeds k=" +
                        std::to_string(k));
    for (auto& b : labels1) b -= 1;
    return BlockAssignment(k, std::move(labels1));
}

} // namespace

BlockAssignment read_blocks(std::istream& in, int k) {
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    // JSON array form
    auto first = all.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && all[first] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(all);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(std::string("bad JSON block array: ") + e.what());
        }
        std::vector<int> labels1;
        for (const auto& x : j) {
            if (!x.is_number_integer()) throw DataError("block array entries must be integers");
            labels1.push_back(x.get<int>());
        }
        return blocks_from_labels(std::move(labels1), k);
    }
    // one label per line
    std::istringstream ss(all);
    std::vector<int> labels1;
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (!clean_line(line)) continue;
        try {
            std::size_t pos = 0;
            int b = std::stoi(line, &pos);
            if (pos != line.size()) throw std::invalid_argument("trailing");
            labels1.push_back(b);
        } catch (const std::exception&) {
            throw DataError("expected one block label on line " + std::to_string(lineno) + ": " +
                            line);
        }
    }
    return blocks_from_labels(std::move(labels1), k);
}

BlockAssignment read_blocks_file(const std::string& path, int k) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open block file: " + path);
    return read_blocks(in, k);
}

void write_blocks(const BlockAssignment& z, std::ostream& out) {
    for (int v = 0; v < z.n(); ++v) out << (z.block_of(v) + 1) << "\n";
}

std::string graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.n();
    auto& e = j["edges"] = nlohmann::json::array();
    for (auto [u, v] : g.edges()) e.push_back({u + 1, v + 1});
    return j.dump();
}

Graph graph_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad graph JSON: ") + e.what());
    }
    if (!j.contains("n")) throw DataError("graph JSON needs an 'n' field");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.value("edges", nlohmann::json::array()))
        edges.emplace_back(e.at(0).get<int>() - 1, e.at(1).get<int>() - 1);
    return Graph::from_edges(j["n"].get<int>(), edges);
}

std::string blocks_to_json(const BlockAssignment& z) {
    nlohmann::json j = nlohmann::json::array();
    for (int v = 0; v < z.n(); ++v) j.push_back(z.block_of(v) + 1);
    return j.dump();
}

} // namespace sbmgof
