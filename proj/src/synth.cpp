#include "carenet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "carenet/rng.hpp"

namespace carenet {

namespace {

std::string padded_id(const char* prefix, int k, std::size_t count) {
    std::size_t width = 1;
    while (count > 10) {
        count /= 10;
        ++width;
    }
    std::string num = std::to_string(k);
    std::string out = prefix;
    out.append(width > num.size() ? width - num.size() : 0, '0');
    out += num;
    return out;
}

std::size_t weighted_pick(const std::vector<double>& cumulative, double u) {
    const double target = u * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    return std::min(static_cast<std::size_t>(it - cumulative.begin()),
                    cumulative.size() - 1);
}

} // namespace

Instance generate_synthetic_instance(std::uint64_t seed, const SynthSpec& spec,
                                     const ModelParams& params) {
    const int W = spec.grid_width;
    const int H = spec.grid_height;
    if (W < 2 || H < 2) throw ValidationError("grid must be at least 2x2");
    const int n_nodes = W * H;
    if (spec.n_facilities > n_nodes) {
        throw ValidationError("infeasible scale: more facilities (" +
                              std::to_string(spec.n_facilities) + ") than nodes (" +
                              std::to_string(n_nodes) + ")");
    }
    if (spec.n_blockgroups > n_nodes) {
        throw ValidationError("infeasible scale: more block groups than nodes");
    }
    if (spec.n_facilities < 1 || spec.n_blockgroups < 1) {
        throw ValidationError("need at least one facility and one block group");
    }

    Instance instance;
    instance.params = params;
    StreetNetwork& net = instance.network;

    // Floodplain bands: contiguous column strips, disjoint tags.
    const int band_start = static_cast<int>(std::floor(W * 0.3));
    const int w100 = std::max(1, static_cast<int>(std::lround(W * spec.fp100_band)));
    const int w500 = std::max(1, static_cast<int>(std::lround(W * spec.fp500_band)));
    auto column_band = [&](double x_m) {
        const int col = static_cast<int>(std::lround(x_m / spec.spacing_m));
        if (col >= band_start && col < band_start + w100) return Floodplain::fp100;
        if (col >= band_start + w100 && col < band_start + w100 + w500) return Floodplain::fp500;
        return Floodplain::none;
    };

    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            net.add_node(padded_id("n", r * W + c, static_cast<std::size_t>(n_nodes)),
                         c * spec.spacing_m, r * spec.spacing_m);
        }
    }

    Rng edge_rng(tag_seed(seed, "edges"));
    static constexpr double kSpeeds[] = {8.9, 11.2, 13.4, 17.9, 22.4}; // m/s
    int edge_count = 0;
    const std::size_t approx_edges =
        static_cast<std::size_t>(n_nodes) * 3; // id width estimate
    auto add_grid_edge = [&](int a, int b, double base_len) {
        const double length = base_len * (0.9 + 0.4 * edge_rng.unit());
        const double speed = kSpeeds[edge_rng.bounded(5)];
        const auto& na = net.nodes()[static_cast<std::size_t>(a)];
        const auto& nb = net.nodes()[static_cast<std::size_t>(b)];
        const Floodplain fp = column_band(0.5 * (na.x + nb.x));
        const bool diagonal = na.x != nb.x && na.y != nb.y;
        const bool oneway = diagonal && edge_rng.unit() < spec.oneway_prob;
        net.add_edge(padded_id("e", edge_count++, approx_edges), na.id, nb.id, length, speed,
                     fp, oneway);
    };
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const int k = r * W + c;
            if (c + 1 < W) add_grid_edge(k, k + 1, spec.spacing_m);
            if (r + 1 < H) add_grid_edge(k, k + W, spec.spacing_m);
            if (c + 1 < W && r + 1 < H && edge_rng.unit() < spec.diagonal_prob) {
                const double diag = spec.spacing_m * 1.41421356237;
                if (edge_rng.unit() < 0.5) {
                    add_grid_edge(k, k + W + 1, diag);
                } else {
                    add_grid_edge(k + 1, k + W, diag);
                }
            }
        }
    }
    net.finalize();

    // Heavy-tailed facility demand weights give the long-tail capacity shape.
    Rng fac_rng(tag_seed(seed, "facilities"));
    std::vector<double> fac_weight(static_cast<std::size_t>(spec.n_facilities));
    for (auto& w : fac_weight) w = fac_rng.lognormal(0.0, 1.2);

    std::vector<int> fac_node(static_cast<std::size_t>(spec.n_facilities), -1);
    if (spec.large_facilities_in_floodplain) {
        std::vector<int> band_nodes, other_nodes;
        for (int k = 0; k < n_nodes; ++k) {
            const auto& nd = net.nodes()[static_cast<std::size_t>(k)];
            (column_band(nd.x) != Floodplain::none ? band_nodes : other_nodes).push_back(k);
        }
        std::vector<std::size_t> order(fac_weight.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return fac_weight[a] != fac_weight[b] ? fac_weight[a] > fac_weight[b] : a < b;
        });
        const std::size_t in_band =
            std::min(band_nodes.size(),
                     static_cast<std::size_t>(std::ceil(0.5 * spec.n_facilities)));
        const auto band_pick = fac_rng.sample_without_replacement(band_nodes.size(), in_band);
        const auto other_pick = fac_rng.sample_without_replacement(
            other_nodes.size(), fac_weight.size() - in_band);
        for (std::size_t i = 0; i < order.size(); ++i) {
            fac_node[order[i]] = i < in_band ? band_nodes[band_pick[i]]
                                             : other_nodes[other_pick[i - in_band]];
        }
    } else {
        const auto pick = fac_rng.sample_without_replacement(
            static_cast<std::size_t>(n_nodes), fac_weight.size());
        for (std::size_t i = 0; i < fac_weight.size(); ++i) {
            fac_node[i] = static_cast<int>(pick[i]);
        }
    }
    for (int j = 0; j < spec.n_facilities; ++j) {
        Facility fac;
        fac.id = padded_id("F", j, static_cast<std::size_t>(spec.n_facilities));
        fac.node = fac_node[static_cast<std::size_t>(j)];
        fac.floodplain = column_band(net.nodes()[static_cast<std::size_t>(fac.node)].x);
        instance.facilities.push_back(std::move(fac));
    }

    Rng cbg_rng(tag_seed(seed, "blockgroups"));
    const auto cbg_pick = cbg_rng.sample_without_replacement(
        static_cast<std::size_t>(n_nodes), static_cast<std::size_t>(spec.n_blockgroups));
    for (int i = 0; i < spec.n_blockgroups; ++i) {
        BlockGroup bg;
        bg.id = padded_id("C", i, static_cast<std::size_t>(spec.n_blockgroups));
        bg.centroid_node = static_cast<int>(cbg_pick[static_cast<std::size_t>(i)]);
        bg.median_income = std::floor(cbg_rng.lognormal(std::log(55000.0), 0.5) * 100.0) / 100.0;
        instance.block_groups.push_back(std::move(bg));
    }
    instance.index_ids();

    // Gravity-style visits: a patient favors high-weight facilities near
    // their block group, so large facilities accumulate short trips.
    Rng visit_rng(tag_seed(seed, "visits"));
    std::vector<double> cbg_weight(instance.block_groups.size());
    for (auto& w : cbg_weight) w = visit_rng.lognormal(0.0, 0.6);
    std::vector<double> cbg_cum(cbg_weight.size());
    std::partial_sum(cbg_weight.begin(), cbg_weight.end(), cbg_cum.begin());

    std::vector<std::vector<double>> fac_cum_by_cbg(instance.block_groups.size());
    for (std::size_t i = 0; i < instance.block_groups.size(); ++i) {
        const auto& ni = net.nodes()[static_cast<std::size_t>(instance.block_groups[i].centroid_node)];
        auto& cum = fac_cum_by_cbg[i];
        cum.resize(instance.facilities.size());
        double acc = 0;
        for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
            const auto& nj = net.nodes()[static_cast<std::size_t>(instance.facilities[j].node)];
            const double d = std::hypot(ni.x - nj.x, ni.y - nj.y);
            const double km = d / 1000.0;
            acc += fac_weight[j] / (1.0 + km * km);
            cum[j] = acc;
        }
    }
    std::vector<std::vector<long long>> visit_count(
        instance.block_groups.size(), std::vector<long long>(instance.facilities.size(), 0));
    for (long long v = 0; v < spec.total_visits; ++v) {
        const std::size_t i = weighted_pick(cbg_cum, visit_rng.unit());
        const std::size_t j = weighted_pick(fac_cum_by_cbg[i], visit_rng.unit());
        ++visit_count[i][j];
    }
    for (std::size_t i = 0; i < instance.block_groups.size(); ++i) {
        for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
            if (visit_count[i][j] > 0) {
                instance.block_groups[i].baseline_visits.emplace_back(static_cast<int>(j),
                                                                      visit_count[i][j]);
            }
        }
    }

    const auto observed = instance.facility_visits();
    for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
        instance.facilities[j].total_capacity =
            estimated_capacity(observed[j], params.capacity_utilization);
        instance.facilities[j].capacity_given = true;
    }
    return instance;
}

Instance generate_synthetic_instance(std::uint64_t seed, const SynthSpec& spec,
                                     const InstanceFiles& out_files,
                                     const ModelParams& params) {
    Instance instance = generate_synthetic_instance(seed, spec, params);
    emit_instance(instance, out_files);
    return instance;
}

} // namespace carenet
