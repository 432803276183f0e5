#include "carenet/ingest.hpp"

#include <algorithm>
#include <fstream>

#include "carenet/csv.hpp"

namespace carenet {

namespace {

constexpr const char* kNodeHeader = "node_id,x,y";
constexpr const char* kEdgeHeader = "edge_id,u,v,length_m,speed_mps,floodplain,oneway";

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& msg) {
    throw ValidationError(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_double_at(const std::string& s, const std::string& path, std::size_t line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) fail_at(path, line, "malformed number '" + s + "'");
    return v;
}

// The network file holds two sections, each with its own header:
// node rows (node_id,x,y) followed by edge rows.
StreetNetwork read_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open file");
    StreetNetwork net;
    std::string line;
    std::size_t lineno = 0;
    bool in_edges = false;
    bool saw_node_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == kNodeHeader) {
            saw_node_header = true;
            continue;
        }
        if (line == kEdgeHeader) {
            in_edges = true;
            continue;
        }
        if (!saw_node_header) fail_at(path, lineno, "expected header '" + std::string(kNodeHeader) + "'");
        const auto f = split_csv_line(line);
        if (!in_edges) {
            if (f.size() != 3) fail_at(path, lineno, "expected 3 node fields, got " + std::to_string(f.size()));
            try {
                net.add_node(f[0], parse_double_at(f[1], path, lineno),
                             parse_double_at(f[2], path, lineno));
            } catch (const ValidationError& e) {
                fail_at(path, lineno, e.what());
            }
        } else {
            if (f.size() != 7) fail_at(path, lineno, "expected 7 edge fields, got " + std::to_string(f.size()));
            if (f[6] != "0" && f[6] != "1") fail_at(path, lineno, "oneway must be 0 or 1");
            try {
                net.add_edge(f[0], f[1], f[2], parse_double_at(f[3], path, lineno),
                             parse_double_at(f[4], path, lineno), parse_floodplain(f[5]),
                             f[6] == "1");
            } catch (const ValidationError& e) {
                fail_at(path, lineno, e.what());
            }
        }
    }
    if (!saw_node_header) throw ValidationError(path + ": empty file, header row required");
    net.finalize();
    return net;
}

} // namespace

Instance ingest_instance(const InstanceFiles& files, const ModelParams& params) {
    Instance instance;
    instance.params = params;
    instance.network = read_network(files.network);

    {
        CsvReader reader(files.facilities, {"facility_id", "node_id", "floodplain"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            Facility fac;
            fac.id = f[0];
            const int node = instance.network.node_index(f[1]);
            if (node < 0) reader.fail("facility '" + f[0] + "' references unknown node '" + f[1] + "'");
            fac.node = node;
            fac.floodplain = parse_floodplain(f[2]);
            if (f.size() >= 4 && !f[3].empty()) {
                fac.total_capacity = reader.field_int(f, 3);
                if (fac.total_capacity < 0) reader.fail("negative capacity");
                fac.capacity_given = true;
            }
            instance.facilities.push_back(std::move(fac));
        }
    }
    {
        CsvReader reader(files.blockgroups, {"cbg_id", "node_id", "median_income_usd"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            BlockGroup bg;
            bg.id = f[0];
            const int node = instance.network.node_index(f[1]);
            if (node < 0) reader.fail("block group '" + f[0] + "' references unknown node '" + f[1] + "'");
            bg.centroid_node = node;
            bg.median_income = reader.field_double(f, 2);
            instance.block_groups.push_back(std::move(bg));
        }
    }
    instance.index_ids();
    {
        CsvReader reader(files.visits, {"cbg_id", "facility_id", "visit_count"});
        std::vector<std::string> f;
        while (reader.next(f)) {
            const auto bg_it = instance.blockgroup_by_id.find(f[0]);
            if (bg_it == instance.blockgroup_by_id.end()) {
                reader.fail("dangling reference to unknown block group '" + f[0] + "'");
            }
            const auto fac_it = instance.facility_by_id.find(f[1]);
            if (fac_it == instance.facility_by_id.end()) {
                reader.fail("dangling reference to unknown facility '" + f[1] + "'");
            }
            const long long count = reader.field_int(f, 2);
            if (count < 0) reader.fail("negative visit_count");
            auto& visits = instance.block_groups[static_cast<std::size_t>(bg_it->second)].baseline_visits;
            for (const auto& [fac, existing] : visits) {
                if (fac == fac_it->second) {
                    reader.fail("duplicate visits row for (" + f[0] + ", " + f[1] + ")");
                }
            }
            visits.emplace_back(fac_it->second, count);
        }
    }
    for (auto& bg : instance.block_groups) {
        std::sort(bg.baseline_visits.begin(), bg.baseline_visits.end());
    }

    const auto observed = instance.facility_visits();
    for (std::size_t j = 0; j < instance.facilities.size(); ++j) {
        Facility& fac = instance.facilities[j];
        if (!fac.capacity_given) {
            fac.total_capacity = estimated_capacity(observed[j], params.capacity_utilization);
            fac.capacity_given = true;
        } else if (fac.total_capacity < observed[j]) {
            throw ValidationError("facility '" + fac.id + "' capacity " +
                                  std::to_string(fac.total_capacity) +
                                  " is below its observed baseline visits " +
                                  std::to_string(observed[j]));
        }
    }
    return instance;
}

void emit_instance(const Instance& instance, const InstanceFiles& files) {
    {
        std::ofstream out(files.network, std::ios::binary);
        if (!out) throw RuntimeError(files.network + ": cannot open for writing");
        out << kNodeHeader << '\n';
        for (const auto& n : instance.network.nodes()) {
            out << n.id << ',' << format_double(n.x) << ',' << format_double(n.y) << '\n';
        }
        out << kEdgeHeader << '\n';
        for (const auto& e : instance.network.edges()) {
            out << e.id << ',' << instance.network.nodes()[static_cast<std::size_t>(e.u)].id << ','
                << instance.network.nodes()[static_cast<std::size_t>(e.v)].id << ','
                << format_double(e.length_m) << ',' << format_double(e.speed_mps) << ','
                << floodplain_name(e.floodplain) << ',' << (e.oneway ? '1' : '0') << '\n';
        }
    }
    {
        CsvWriter w(files.facilities, {"facility_id", "node_id", "floodplain", "total_capacity"});
        for (const auto& f : instance.facilities) {
            w.row({f.id, instance.network.nodes()[static_cast<std::size_t>(f.node)].id,
                   floodplain_name(f.floodplain),
                   f.capacity_given ? std::to_string(f.total_capacity) : std::string()});
        }
        w.close();
    }
    {
        CsvWriter w(files.blockgroups, {"cbg_id", "node_id", "median_income_usd"});
        for (const auto& bg : instance.block_groups) {
            w.row({bg.id, instance.network.nodes()[static_cast<std::size_t>(bg.centroid_node)].id,
                   format_double(bg.median_income)});
        }
        w.close();
    }
    {
        CsvWriter w(files.visits, {"cbg_id", "facility_id", "visit_count"});
        for (const auto& bg : instance.block_groups) {
            for (const auto& [fac, count] : bg.baseline_visits) {
                w.row({bg.id, instance.facilities[static_cast<std::size_t>(fac)].id,
                       std::to_string(count)});
            }
        }
        w.close();
    }
}

} // namespace carenet
