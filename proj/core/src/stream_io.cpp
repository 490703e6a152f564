#include "compas/stream_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace compas {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool is_comment_or_blank(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

// Walks non-comment lines, handing (line number, fields) to `fn`.
template <typename Fn>
void for_each_record(const std::string& text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string_view line(text.data() + pos, end - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!is_comment_or_blank(line)) fn(line_no, split_fields(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << body;
    if (!out) throw DataError("write failed for " + path.string());
}

std::string comment_block(const std::string& header_comment) {
    if (header_comment.empty()) return {};
    std::string out;
    std::istringstream lines(header_comment);
    std::string line;
    while (std::getline(lines, line)) out += "# " + line + "\n";
    return out;
}

}  // namespace

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : DataError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::size_t EdgeStream::node_count() const {
    if (node_count_hint) return *node_count_hint;
    std::unordered_set<NodeId> nodes;
    for (const auto& e : events) {
        nodes.insert(e.u);
        nodes.insert(e.v);
    }
    return nodes.size();
}

std::vector<Edge> EdgeStream::distinct_edges() const {
    std::unordered_set<Edge, EdgeHash> seen;
    std::vector<Edge> out;
    for (const auto& e : events) {
        Edge edge(e.u, e.v);
        if (seen.insert(edge).second) out.push_back(edge);
    }
    return out;
}

EdgeStream parse_edge_stream(const std::string& text, EdgeFileFormat format,
                             const std::string& source_name) {
    struct Row {
        NodeId u, v;
        double t;
    };
    std::vector<Row> rows;
    EdgeStream stream;
    EdgeFileFormat resolved = format;

    for_each_record(text, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
        if (f.size() != 2 && f.size() != 3) {
            throw ParseError(source_name, line_no, "expected 'u v' or 'u v t'");
        }
        if (resolved == EdgeFileFormat::kAuto) {
            resolved = f.size() == 3 ? EdgeFileFormat::kTimestamped : EdgeFileFormat::kPlain;
        }
        const std::size_t want = resolved == EdgeFileFormat::kTimestamped ? 3 : 2;
        if (f.size() != want) {
            throw ParseError(source_name, line_no,
                             "expected " + std::to_string(want) + " fields");
        }
        Row row{};
        if (!parse_number(f[0], row.u) || !parse_number(f[1], row.v)) {
            throw ParseError(source_name, line_no, "node identifiers must be non-negative integers");
        }
        row.t = static_cast<double>(rows.size());
        if (want == 3 && (!parse_number(f[2], row.t) || !std::isfinite(row.t))) {
            throw ParseError(source_name, line_no, "bad timestamp");
        }
        if (row.u == row.v) {
            ++stream.dropped_self_loops;
            return;
        }
        rows.push_back(row);
    });

    if (rows.empty()) throw DataError(source_name + ": empty edge stream");
    if (resolved == EdgeFileFormat::kTimestamped) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const Row& a, const Row& b) { return a.t < b.t; });
    }
    stream.events.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        stream.events.push_back({rows[i].u, rows[i].v, i});
    }
    return stream;
}

EdgeStream load_edge_stream(const std::filesystem::path& path, EdgeFileFormat format) {
    return parse_edge_stream(read_file(path), format, path.string());
}

GroundTruthLabels parse_labels(const std::string& text, const std::string& source_name) {
    GroundTruthLabels labels;
    for_each_record(text, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
        NodeId node = 0;
        CommunityId label = 0;
        if (f.size() != 2 || !parse_number(f[0], node) || !parse_number(f[1], label)) {
            throw ParseError(source_name, line_no, "expected 'node community'");
        }
        labels[node] = label;
    });
    return labels;
}

GroundTruthLabels load_labels(const std::filesystem::path& path) {
    return parse_labels(read_file(path), path.string());
}

EdgeStream randomize_order(const EdgeStream& stream, std::uint64_t seed) {
    if (stream.empty()) throw DataError("randomize_order: empty stream");
    EdgeStream out = stream;
    Rng rng(seed);
    auto& ev = out.events;
    for (std::size_t i = ev.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(ev[i], ev[pick(rng)]);
    }
    for (std::size_t i = 0; i < ev.size(); ++i) ev[i].t = i;
    return out;
}

EdgeStream perturb_order(const EdgeStream& stream, double y, std::uint64_t seed) {
    if (!(y >= 0.0 && y <= 1.0)) throw ConfigError("perturb_order: y must lie in [0, 1]");
    EdgeStream out = stream;
    auto& ev = out.events;
    const auto swaps = static_cast<std::size_t>(std::floor(y * static_cast<double>(ev.size())));
    if (ev.size() >= 2) {
        Rng rng(seed);
        std::uniform_int_distribution<std::size_t> first(0, ev.size() - 1);
        std::uniform_int_distribution<std::size_t> second(0, ev.size() - 2);
        for (std::size_t s = 0; s < swaps; ++s) {
            std::size_t i = first(rng);
            std::size_t j = second(rng);
            if (j >= i) ++j;  // distinct pair
            std::swap(ev[i], ev[j]);
        }
    }
    for (std::size_t i = 0; i < ev.size(); ++i) ev[i].t = i;
    return out;
}

std::size_t planted_block_of(std::size_t node, std::size_t n_nodes, std::size_t k_comms) {
    return node * k_comms / n_nodes;
}

PlantedPartition generate_planted_partition(const PlantedPartitionParams& p) {
    if (p.k_comms < 1 || p.n_nodes < p.k_comms) {
        throw ConfigError("planted partition: need n_nodes >= k_comms >= 1");
    }
    if (!(p.p_out >= 0.0 && p.p_out < p.p_in && p.p_in <= 1.0)) {
        throw ConfigError("planted partition: need 0 <= p_out < p_in <= 1");
    }
    const std::size_t n = p.n_nodes;
    std::vector<std::size_t> block_size(p.k_comms, 0);
    for (std::size_t i = 0; i < n; ++i) ++block_size[planted_block_of(i, n, p.k_comms)];
    double intra_pairs = 0.0;
    for (std::size_t s : block_size) intra_pairs += 0.5 * static_cast<double>(s) * (s - 1.0);
    const double all_pairs = 0.5 * static_cast<double>(n) * (n - 1.0);
    const double expected = p.p_in * intra_pairs + p.p_out * (all_pairs - intra_pairs);
    if (expected <= 0.0) throw ConfigError("planted partition: expected edge count is zero");

    Rng rng(p.seed);
    // Identifiers are shuffled so that node ids carry no block information.
    std::vector<NodeId> id(n);
    std::iota(id.begin(), id.end(), NodeId{0});
    for (std::size_t i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(id[i], id[pick(rng)]);
    }
    PlantedPartition out;
    auto& ev = out.stream.events;
    std::vector<bool> touched(n, false);
    // Each row j > i splits into the rest of i's block (p_in) and everything
    // after it (p_out); a geometric skip walks each run of equal probability.
    auto draw_run = [&](std::size_t i, std::size_t lo, std::size_t hi, double prob) {
        if (prob <= 0.0 || lo >= hi) return;
        std::geometric_distribution<std::size_t> skip(prob < 1.0 ? prob : 0.5);
        for (std::size_t j = lo;; ++j) {
            if (prob < 1.0) j += skip(rng);
            if (j >= hi) break;
            ev.push_back({id[i], id[j], 0});
            touched[i] = touched[j] = true;
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bi = planted_block_of(i, n, p.k_comms);
        const std::size_t block_end = ((bi + 1) * n + p.k_comms - 1) / p.k_comms;
        draw_run(i, i + 1, block_end, p.p_in);
        draw_run(i, block_end, n, p.p_out);
    }
    if (ev.empty()) throw DataError("planted partition: no edges were drawn");
    for (std::size_t i = 0; i < n; ++i) {
        if (touched[i]) out.labels[id[i]] = planted_block_of(i, n, p.k_comms);
    }
    for (std::size_t i = ev.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(ev[i], ev[pick(rng)]);
    }
    for (std::size_t i = 0; i < ev.size(); ++i) ev[i].t = i;
    out.stream.node_count_hint.reset();
    return out;
}

void write_edge_file(const std::filesystem::path& path, std::span<const Edge> edges,
                     const std::string& header_comment) {
    std::string body = comment_block(header_comment);
    for (const auto& e : edges) body += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    write_text(path, body);
}

void write_stream_file(const std::filesystem::path& path, const EdgeStream& stream,
                       const std::string& header_comment) {
    std::string body = comment_block(header_comment);
    for (const auto& e : stream.events) {
        body += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    }
    write_text(path, body);
}

void write_labels(const std::filesystem::path& path, const GroundTruthLabels& labels,
                  const std::string& header_comment) {
    std::vector<std::pair<NodeId, CommunityId>> rows(labels.begin(), labels.end());
    std::sort(rows.begin(), rows.end());
    std::string body = comment_block(header_comment);
    for (const auto& [node, c] : rows) body += std::to_string(node) + " " + std::to_string(c) + "\n";
    write_text(path, body);
}

}  // namespace compas
