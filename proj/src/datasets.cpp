#include "stratgraph/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "stratgraph/graph_ops.hpp"
#include "stratgraph/io_util.hpp"

namespace stratgraph {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw io_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw format_error("");
        return v;
    } catch (...) {
        throw format_error(std::string("bad number in ") + what + ": '" + s + "'");
    }
}

int parse_int(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw format_error("");
        return v;
    } catch (...) {
        throw format_error(std::string("bad integer in ") + what + ": '" + s + "'");
    }
}

void check_sorted_unique(const std::vector<int>& ids, int n, const char* what) {
    for (size_t k = 0; k < ids.size(); ++k) {
        if (ids[k] < 0 || ids[k] >= n)
            throw std::invalid_argument(std::string(what) + ": id out of range");
        if (k > 0 && ids[k] <= ids[k - 1])
            throw std::invalid_argument(std::string(what) + ": ids must be sorted and unique");
    }
}

}  // namespace

void BinarizationMap::validate() const {
    for (int c : negative_classes)
        if (positive_classes.count(c))
            throw std::invalid_argument("binarization: classes overlap");
}

BinarizationMap cora_binarization() { return {{0, 2, 3}, {1, 4, 5, 6}}; }
BinarizationMap citeseer_binarization() { return {{0, 2, 3}, {1, 4, 5}}; }
BinarizationMap pubmed_binarization() { return {{1, 2}, {0}}; }

void DatasetBundle::validate() const {
    graph.validate();
    features.validate();
    if (features.n != graph.n)
        throw std::invalid_argument("bundle: feature rows do not match graph");
    validate_labels(labels, graph.n);
    check_sorted_unique(train_mask, graph.n, "bundle train mask");
    check_sorted_unique(test_mask, graph.n, "bundle test mask");
    std::vector<int> overlap;
    std::set_intersection(train_mask.begin(), train_mask.end(),
                          test_mask.begin(), test_mask.end(),
                          std::back_inserter(overlap));
    if (!overlap.empty())
        throw std::invalid_argument("bundle: train and test masks overlap");
    if (meta.n != graph.n || meta.feature_dim != features.dim)
        throw std::invalid_argument("bundle: meta does not match data");
}

DatasetBundle generate_synthetic(int n_per_split, double alpha, uint64_t seed) {
    if (n_per_split < 16)
        throw std::invalid_argument("synthetic: need n >= 16 to sample 8 distinct neighbors");
    if (n_per_split % 2 != 0)
        throw std::invalid_argument("synthetic: n must be even for balanced classes");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("synthetic: alpha must be in [0,1]");

    const int n = n_per_split;
    const int total = 2 * n;
    DatasetBundle b;
    b.graph.n = total;
    b.features = NodeFeatures::zeros(total, 1);
    b.labels.resize(static_cast<size_t>(total));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    for (int comp = 0; comp < 2; ++comp) {
        const int base = comp * n;
        // First half of each component is the positive class.
        std::vector<int> positives, negatives;
        for (int k = 0; k < n; ++k) {
            const int id = base + k;
            const int y = k < n / 2 ? 1 : -1;
            b.labels[static_cast<size_t>(id)] = y;
            b.features.at(id, 0) = static_cast<double>(y) + noise(rng);
            (y == 1 ? positives : negatives).push_back(id);
        }
        for (int k = 0; k < n; ++k) {
            const int id = base + k;
            const bool pos = b.labels[static_cast<size_t>(id)] == 1;
            const std::vector<int>& same = pos ? positives : negatives;
            const std::vector<int>& other = pos ? negatives : positives;

            // 5 same-class + 3 other-class in-neighbors, no replacement.
            auto sample = [&rng, id](const std::vector<int>& pool, int count,
                                     std::vector<int>* out) {
                std::vector<int> candidates;
                candidates.reserve(pool.size());
                for (int c : pool)
                    if (c != id) candidates.push_back(c);
                for (int t = 0; t < count; ++t) {
                    std::uniform_int_distribution<size_t> pick(
                        0, candidates.size() - 1);
                    const size_t at = pick(rng);
                    out->push_back(candidates[at]);
                    candidates.erase(candidates.begin() +
                                     static_cast<std::ptrdiff_t>(at));
                }
            };
            std::vector<int> sources;
            sample(same, 5, &sources);
            sample(other, 3, &sources);
            std::sort(sources.begin(), sources.end());
            for (int src : sources) b.graph.edges.push_back({src, id, 1.0});
        }
    }
    std::sort(b.graph.edges.begin(), b.graph.edges.end(),
              [](const Edge& a, const Edge& c) {
                  return std::tie(a.src, a.dst) < std::tie(c.src, c.dst);
              });
    for (int k = 0; k < n; ++k) b.train_mask.push_back(k);
    for (int k = n; k < total; ++k) b.test_mask.push_back(k);

    b.meta.name = "synthetic";
    b.meta.n = total;
    b.meta.feature_dim = 1;
    b.meta.weight_scheme = "alpha";
    b.meta.alpha = alpha;
    b.meta.notes = "n_per_split=" + std::to_string(n) +
                   " seed=" + std::to_string(seed);
    b.validate();
    return b;
}

void save_bundle(const DatasetBundle& bundle, const fs::path& dir,
                 bool features_binary) {
    bundle.validate();
    std::error_code ec;
    fs::create_directories(dir, ec);

    {
        nlohmann::json meta;
        meta["format_version"] = 1;
        meta["name"] = bundle.meta.name;
        meta["n"] = bundle.meta.n;
        meta["feature_dim"] = bundle.meta.feature_dim;
        meta["weight_scheme"] = bundle.meta.weight_scheme;
        meta["alpha"] = bundle.meta.alpha;
        meta["sgc_k"] = bundle.meta.sgc_k;
        meta["beta"] = bundle.meta.beta;
        meta["tol"] = bundle.meta.tol;
        meta["notes"] = bundle.meta.notes;
        if (bundle.meta.class_map) {
            meta["class_map"] = {
                {"negative", std::vector<int>(
                                 bundle.meta.class_map->negative_classes.begin(),
                                 bundle.meta.class_map->negative_classes.end())},
                {"positive", std::vector<int>(
                                 bundle.meta.class_map->positive_classes.begin(),
                                 bundle.meta.class_map->positive_classes.end())},
            };
        }
        std::ofstream out(dir / "meta.json", std::ios::binary);
        if (!out) throw io_error("cannot write meta.json");
        out << meta.dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "edges.csv", std::ios::binary);
        if (!out) throw io_error("cannot write edges.csv");
        out << "src,dst,weight\n";
        for (const Edge& e : bundle.graph.edges)
            out << e.src << ',' << e.dst << ',' << format_double(e.weight) << '\n';
    }
    if (features_binary) {
        std::ofstream out(dir / "features.f32", std::ios::binary);
        if (!out) throw io_error("cannot write features.f32");
        for (double v : bundle.features.data) {
            const float f = static_cast<float>(v);
            out.write(reinterpret_cast<const char*>(&f), sizeof(float));
        }
    } else {
        std::ofstream out(dir / "features.csv", std::ios::binary);
        if (!out) throw io_error("cannot write features.csv");
        for (int i = 0; i < bundle.features.n; ++i) {
            for (int k = 0; k < bundle.features.dim; ++k) {
                if (k) out << ',';
                out << format_double(bundle.features.at(i, k));
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "labels.csv", std::ios::binary);
        if (!out) throw io_error("cannot write labels.csv");
        for (int v : bundle.labels) out << v << '\n';
    }
    {
        std::ofstream out(dir / "masks.csv", std::ios::binary);
        if (!out) throw io_error("cannot write masks.csv");
        out << "node_id,split\n";
        for (int id : bundle.train_mask) out << id << ",train\n";
        for (int id : bundle.test_mask) out << id << ",test\n";
    }
}

DatasetBundle load_bundle(const fs::path& dir) {
    DatasetBundle b;

    // meta.json
    {
        const fs::path p = dir / "meta.json";
        if (!fs::exists(p)) throw io_error("missing meta.json in " + dir.string());
        nlohmann::json meta;
        try {
            meta = nlohmann::json::parse(read_text(p));
        } catch (const nlohmann::json::exception& e) {
            throw format_error(std::string("meta.json: ") + e.what());
        }
        try {
            b.meta.name = meta.value("name", std::string("unnamed"));
            b.meta.n = meta.at("n").get<int>();
            b.meta.feature_dim = meta.at("feature_dim").get<int>();
            b.meta.weight_scheme = meta.value("weight_scheme", std::string("sgc"));
            b.meta.alpha = meta.value("alpha", 0.0);
            b.meta.sgc_k = meta.value("sgc_k", 1);
            b.meta.beta = meta.value("beta", 1.0);
            b.meta.tol = meta.value("tol", 1e-6);
            b.meta.notes = meta.value("notes", std::string());
            if (meta.contains("class_map")) {
                BinarizationMap map;
                for (int c : meta["class_map"].at("negative").get<std::vector<int>>())
                    map.negative_classes.insert(c);
                for (int c : meta["class_map"].at("positive").get<std::vector<int>>())
                    map.positive_classes.insert(c);
                map.validate();
                b.meta.class_map = std::move(map);
            }
        } catch (const nlohmann::json::exception& e) {
            throw format_error(std::string("meta.json: ") + e.what());
        }
    }
    const int n = b.meta.n;
    const int dim = b.meta.feature_dim;
    b.graph.n = n;

    // edges.csv
    {
        const fs::path p = dir / "edges.csv";
        if (!fs::exists(p)) throw io_error("missing edges.csv in " + dir.string());
        const std::vector<std::string> lines = split_lines(read_text(p));
        for (size_t k = 0; k < lines.size(); ++k) {
            if (lines[k].empty()) continue;
            if (k == 0 && lines[k] == "src,dst,weight") continue;
            const auto f = split_csv(lines[k]);
            if (f.size() != 3) throw format_error("edges.csv: expected src,dst,weight");
            b.graph.edges.push_back({parse_int(f[0], "edges.csv"),
                                     parse_int(f[1], "edges.csv"),
                                     parse_double(f[2], "edges.csv")});
        }
    }

    // features.csv or features.f32
    {
        const fs::path csv = dir / "features.csv";
        const fs::path bin = dir / "features.f32";
        b.features.n = n;
        b.features.dim = dim;
        if (fs::exists(csv)) {
            const std::vector<std::string> lines = split_lines(read_text(csv));
            for (const std::string& line : lines) {
                if (line.empty()) continue;
                const auto f = split_csv(line);
                if (static_cast<int>(f.size()) != dim)
                    throw format_error("features.csv: wrong column count");
                for (const std::string& s : f)
                    b.features.data.push_back(parse_double(s, "features.csv"));
            }
        } else if (fs::exists(bin)) {
            std::ifstream in(bin, std::ios::binary);
            if (!in) throw io_error("cannot open features.f32");
            std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
            if (bytes.size() != static_cast<size_t>(n) * static_cast<size_t>(dim) * 4)
                throw format_error("features.f32: wrong byte count");
            b.features.data.reserve(static_cast<size_t>(n) * dim);
            for (size_t off = 0; off < bytes.size(); off += 4) {
                float f;
                std::memcpy(&f, bytes.data() + off, 4);
                b.features.data.push_back(static_cast<double>(f));
            }
        } else {
            throw io_error("missing features.csv / features.f32 in " + dir.string());
        }
        if (b.features.data.size() != static_cast<size_t>(n) * static_cast<size_t>(dim))
            throw format_error("features: row count does not match meta n");
    }

    // labels.csv (raw; binarized below if needed)
    std::vector<int> raw_labels;
    {
        const fs::path p = dir / "labels.csv";
        if (!fs::exists(p)) throw io_error("missing labels.csv in " + dir.string());
        for (const std::string& line : split_lines(read_text(p))) {
            if (line.empty()) continue;
            raw_labels.push_back(parse_int(line, "labels.csv"));
        }
        if (raw_labels.size() != static_cast<size_t>(n))
            throw format_error("labels.csv: row count does not match meta n");
    }
    const bool already_binary =
        std::all_of(raw_labels.begin(), raw_labels.end(),
                    [](int v) { return v == -1 || v == 1; });
    if (already_binary) {
        b.labels = std::move(raw_labels);
    } else if (b.meta.class_map) {
        b.labels = binarize(raw_labels, *b.meta.class_map);
    } else {
        throw format_error("labels.csv: non-binary labels and no class_map in meta");
    }

    // masks.csv; train and val are merged for training.
    {
        const fs::path p = dir / "masks.csv";
        if (!fs::exists(p)) throw io_error("missing masks.csv in " + dir.string());
        const std::vector<std::string> lines = split_lines(read_text(p));
        for (size_t k = 0; k < lines.size(); ++k) {
            if (lines[k].empty()) continue;
            if (k == 0 && lines[k] == "node_id,split") continue;
            const auto f = split_csv(lines[k]);
            if (f.size() != 2) throw format_error("masks.csv: expected node_id,split");
            const int id = parse_int(f[0], "masks.csv");
            if (f[1] == "train" || f[1] == "val")
                b.train_mask.push_back(id);
            else if (f[1] == "test")
                b.test_mask.push_back(id);
            else
                throw format_error("masks.csv: split must be train, val, or test");
        }
        std::sort(b.train_mask.begin(), b.train_mask.end());
        b.train_mask.erase(std::unique(b.train_mask.begin(), b.train_mask.end()),
                           b.train_mask.end());
        std::sort(b.test_mask.begin(), b.test_mask.end());
    }

    try {
        b.validate();
    } catch (const std::invalid_argument& e) {
        throw format_error(std::string("bundle: ") + e.what());
    }
    return b;
}

Labels binarize(const std::vector<int>& multiclass, const BinarizationMap& map) {
    map.validate();
    Labels out;
    out.reserve(multiclass.size());
    for (int c : multiclass) {
        if (map.negative_classes.count(c))
            out.push_back(-1);
        else if (map.positive_classes.count(c))
            out.push_back(1);
        else
            throw std::invalid_argument("binarize: class " + std::to_string(c) +
                                        " not covered by the map");
    }
    return out;
}

InductiveSplit make_inductive_split(const DatasetBundle& bundle, int K) {
    if (K < 1) throw std::invalid_argument("inductive split: K must be >= 1");
    bundle.validate();

    // Forward BFS from all train nodes, depth <= K.
    const auto adj = bundle.graph.out_adjacency();
    std::vector<int> depth(static_cast<size_t>(bundle.graph.n), -1);
    std::deque<int> queue;
    for (int id : bundle.train_mask) {
        depth[static_cast<size_t>(id)] = 0;
        queue.push_back(id);
    }
    std::vector<uint8_t> influenced(static_cast<size_t>(bundle.graph.n), 0);
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        const int d = depth[static_cast<size_t>(v)];
        if (d == K) continue;
        for (int w : adj[static_cast<size_t>(v)]) {
            influenced[static_cast<size_t>(w)] = 1;
            if (depth[static_cast<size_t>(w)] == -1) {
                depth[static_cast<size_t>(w)] = d + 1;
                queue.push_back(w);
            }
        }
    }

    InductiveSplit out{bundle, 0.0};
    std::vector<int> kept;
    for (int id : bundle.test_mask)
        if (!influenced[static_cast<size_t>(id)]) kept.push_back(id);
    if (!bundle.test_mask.empty())
        out.removed_fraction =
            1.0 - static_cast<double>(kept.size()) / bundle.test_mask.size();
    out.bundle.test_mask = std::move(kept);
    return out;
}

SubgraphView induced_subgraph(const DatasetBundle& bundle,
                              const std::vector<int>& keep) {
    bundle.validate();
    check_sorted_unique(keep, bundle.graph.n, "subgraph keep set");

    SubgraphView view;
    view.old_to_new.assign(static_cast<size_t>(bundle.graph.n), -1);
    for (size_t k = 0; k < keep.size(); ++k)
        view.old_to_new[static_cast<size_t>(keep[k])] = static_cast<int>(k);

    DatasetBundle& b = view.bundle;
    b.graph.n = static_cast<int>(keep.size());
    for (const Edge& e : bundle.graph.edges) {
        const int s = view.old_to_new[static_cast<size_t>(e.src)];
        const int d = view.old_to_new[static_cast<size_t>(e.dst)];
        if (s >= 0 && d >= 0) b.graph.edges.push_back({s, d, e.weight});
    }
    b.features = NodeFeatures::zeros(b.graph.n, bundle.features.dim);
    b.labels.resize(static_cast<size_t>(b.graph.n));
    for (size_t k = 0; k < keep.size(); ++k) {
        const int old_id = keep[k];
        std::copy(bundle.features.row(old_id),
                  bundle.features.row(old_id) + bundle.features.dim,
                  b.features.row(static_cast<int>(k)));
        b.labels[k] = bundle.labels[static_cast<size_t>(old_id)];
    }
    for (int id : bundle.train_mask)
        if (view.old_to_new[static_cast<size_t>(id)] >= 0)
            b.train_mask.push_back(view.old_to_new[static_cast<size_t>(id)]);
    for (int id : bundle.test_mask)
        if (view.old_to_new[static_cast<size_t>(id)] >= 0)
            b.test_mask.push_back(view.old_to_new[static_cast<size_t>(id)]);
    b.meta = bundle.meta;
    b.meta.n = b.graph.n;
    b.validate();
    return view;
}

EmbeddingWeights bundle_weights(const DatasetBundle& bundle) {
    const std::string& scheme = bundle.meta.weight_scheme;
    if (scheme == "alpha")
        return build_alpha_weights(bundle.graph, bundle.meta.alpha);
    if (scheme == "sgc" || scheme.empty())
        return build_sgc_weights(bundle.graph, bundle.meta.sgc_k, true);
    if (scheme == "explicit") {
        std::vector<EmbeddingWeights::Entry> entries;
        entries.reserve(bundle.graph.edges.size());
        for (const Edge& e : bundle.graph.edges)
            entries.push_back({e.src, e.dst, e.weight});
        return EmbeddingWeights(bundle.graph.n, entries);
    }
    throw std::invalid_argument("bundle: unknown weight scheme '" + scheme + "'");
}

}  // namespace stratgraph
