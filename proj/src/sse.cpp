#include "sseatk/sse.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "sseatk/common.hpp"
#include "sseatk/rng.hpp"

namespace sseatk {

const char* to_string(DistributionKind kind) {
    switch (kind) {
        case DistributionKind::uniform: return "uniform";
        case DistributionKind::zipfian: return "zipfian";
        case DistributionKind::inv_zipfian: return "inv_zipfian";
    }
    return "?";
}

const char* to_string(KnownPolicy policy) {
    return policy == KnownPolicy::uniform ? "uniform" : "top_quartile";
}

double pmf(const QueryDistribution& dist, std::size_t rank, std::size_t n) {
    require(rank >= 1 && rank <= n, "rank ", rank, " out of range 1..", n);
    switch (dist.kind) {
        case DistributionKind::uniform:
            return 1.0 / static_cast<double>(n);
        case DistributionKind::zipfian:
        case DistributionKind::inv_zipfian: {
            double harmonic = 0.0;
            for (std::size_t i = 1; i <= n; ++i) harmonic += 1.0 / static_cast<double>(i);
            std::size_t k = dist.kind == DistributionKind::zipfian ? rank : n - rank + 1;
            return (1.0 / static_cast<double>(k)) / harmonic;
        }
    }
    return 0.0;
}

QueryLog sample_queries(const IndexMatrix& index_real, const QueryDistribution& dist,
                        std::size_t l, std::uint64_t seed) {
    const std::size_t m = index_real.m();
    require(l <= m, "cannot observe ", l, " unique queries from a vocabulary of ", m);

    std::vector<double> cdf(m);
    double acc = 0.0;
    for (std::size_t r = 1; r <= m; ++r) {
        acc += pmf(dist, r, m);
        cdf[r - 1] = acc;
    }

    Rng rng(seed);
    std::vector<bool> drawn(m, false);
    std::vector<std::uint32_t> picked;
    picked.reserve(l);
    while (picked.size() < l) {
        double x = rng.real() * acc;
        auto it = std::lower_bound(cdf.begin(), cdf.end(), x);
        auto pos = static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), m - 1));
        if (drawn[pos]) continue;  // sequential rejection for a without-replacement draw
        drawn[pos] = true;
        picked.push_back(pos);
    }

    QueryLog log;
    log.observed.trapdoors.reserve(l);
    log.observed.responses.reserve(l);
    log.truth.reserve(l);
    std::unordered_set<std::string> used;
    for (std::uint32_t pos : picked) {
        std::string token;
        do {
            char buf[33];
            std::snprintf(buf, sizeof(buf), "%016llx%016llx",
                          static_cast<unsigned long long>(rng.u64()),
                          static_cast<unsigned long long>(rng.u64()));
            token = buf;
        } while (!used.insert(token).second);
        log.observed.trapdoors.push_back(std::move(token));
        log.observed.responses.push_back(index_real.columns[pos].ones());
        log.truth.push_back(index_real.vocab.words[pos]);
    }
    return log;
}

QueryLog select_known_queries(QueryLog log, std::size_t k, KnownPolicy policy,
                              std::uint64_t seed,
                              const std::unordered_set<std::string>* eligible_keywords) {
    const std::size_t l = log.observed.query_count();
    require(k <= l, "cannot mark ", k, " known queries among ", l, " observed ones");
    require(log.truth.size() == l, "query log is redacted: truth map unavailable");

    std::vector<std::uint32_t> pool;
    if (policy == KnownPolicy::uniform) {
        pool.resize(l);
        for (std::uint32_t i = 0; i < l; ++i) pool[i] = i;
    } else {
        std::vector<std::uint32_t> by_size(l);
        for (std::uint32_t i = 0; i < l; ++i) by_size[i] = i;
        std::sort(by_size.begin(), by_size.end(), [&](std::uint32_t a, std::uint32_t b) {
            auto sa = log.observed.responses[a].size(), sb = log.observed.responses[b].size();
            if (sa != sb) return sa > sb;
            return a < b;
        });
        by_size.resize((l + 3) / 4);
        pool = std::move(by_size);
    }
    if (eligible_keywords) {
        std::erase_if(pool, [&](std::uint32_t i) {
            return eligible_keywords->find(log.truth[i]) == eligible_keywords->end();
        });
    }
    require(k <= pool.size(), "known-query count ", k, " exceeds the candidate pool of ",
            pool.size(), " queries");

    Rng rng(seed);
    auto chosen = sample_without_replacement(static_cast<std::uint32_t>(pool.size()),
                                             static_cast<std::uint32_t>(k), rng);
    std::vector<std::uint32_t> indices;
    indices.reserve(k);
    for (auto c : chosen) indices.push_back(pool[c]);
    std::sort(indices.begin(), indices.end());

    log.observed.known.clear();
    for (auto i : indices) log.observed.known.push_back({i, log.truth[i]});
    return log;
}

CoocTensor trapdoor_cooccurrence(const ObservedQueries& observed, std::size_t n_divisor,
                                 std::size_t order, const CoocOptions& opts) {
    require(n_divisor > 0, "trapdoor co-occurrence requires a positive document-count divisor");
    const std::size_t l = observed.query_count();

    // Compact the union of returned document ids into rows 0..p-1.
    std::unordered_map<std::uint32_t, std::uint32_t> row_of;
    for (const auto& resp : observed.responses)
        for (std::uint32_t id : resp) row_of.try_emplace(id, static_cast<std::uint32_t>(row_of.size()));
    const std::size_t p = row_of.size();

    std::vector<BitVector> columns(l, BitVector(p));
    for (std::size_t j = 0; j < l; ++j)
        for (std::uint32_t id : observed.responses[j]) columns[j].set(row_of.at(id));

    return cooccurrence_from_columns(columns, p, order, n_divisor, opts);
}

void save_query_log(const QueryLog& log, const std::filesystem::path& file, bool redacted) {
    if (!redacted)
        require(log.truth.size() == log.observed.query_count(),
                "cannot save an unredacted log without a truth map");
    std::ofstream out(file, std::ios::binary);
    if (!out) fail("cannot open query log for writing: ", file.string());

    nlohmann::json header = {{"format", "sseatk-querylog"},
                             {"version", 1},
                             {"redacted", redacted},
                             {"queries", log.observed.query_count()}};
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < log.observed.query_count(); ++i) {
        nlohmann::json row = {{"td", log.observed.trapdoors[i]},
                              {"docs", log.observed.responses[i]}};
        if (!redacted) row["kw"] = log.truth[i];
        out << row.dump() << '\n';
    }
    nlohmann::json known = nlohmann::json::array();
    for (const auto& kq : log.observed.known)
        known.push_back({{"index", kq.query_index}, {"kw", kq.keyword}});
    out << nlohmann::json{{"known", known}}.dump() << '\n';
    if (!out) fail("error while writing query log: ", file.string());
}

QueryLog load_query_log(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail("cannot open query log: ", file.string());
    std::string line;
    if (!std::getline(in, line)) fail("empty query log: ", file.string());
    auto header = nlohmann::json::parse(line);
    if (header.value("format", "") != "sseatk-querylog" || header.value("version", 0) != 1)
        fail("unrecognized query log header in ", file.string());
    const bool redacted = header.value("redacted", true);
    const auto count = header.value("queries", std::size_t{0});

    QueryLog log;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) fail("truncated query log: ", file.string());
        auto row = nlohmann::json::parse(line);
        log.observed.trapdoors.push_back(row.at("td").get<std::string>());
        log.observed.responses.push_back(row.at("docs").get<std::vector<std::uint32_t>>());
        if (!redacted) log.truth.push_back(row.at("kw").get<std::string>());
    }
    if (std::getline(in, line) && !line.empty()) {
        auto tail = nlohmann::json::parse(line);
        for (const auto& kq : tail.at("known"))
            log.observed.known.push_back(
                {kq.at("index").get<std::uint32_t>(), kq.at("kw").get<std::string>()});
    }
    return log;
}

}  // namespace sseatk
