#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "fractional.hpp"
#include "policies.hpp"

namespace adwords {

// JSON-lines traces: one record per match (integral) or segment (fractional).

inline void write_trace(std::ostream& os, const Allocation& a) {
    for (std::size_t t = 1; t <= a.num_arrivals(); ++t) {
        if (!a.matches[t - 1]) continue;
        nlohmann::ordered_json j;
        j["t"] = t;
        j["i"] = *a.matches[t - 1];
        j["price"] = a.price[t - 1];
        j["paid"] = a.paid[t - 1];
        os << j.dump() << '\n';
    }
}

inline void write_trace(std::ostream& os, const FractionalAllocation& f) {
    for (const auto& s : f.segments) {
        nlohmann::ordered_json j;
        j["t"] = s.arrival;
        j["i"] = s.resource;
        j["price"] = s.price;
        j["paid"] = s.consumed;
        j["tau1"] = s.tau1;
        j["tau2"] = s.tau2;
        os << j.dump() << '\n';
    }
}

struct TraceRecord {
    std::size_t t = 0;
    ResourceId i = 0;
    double price = 0.0;
    double paid = 0.0;
    std::optional<double> tau1, tau2;
};

inline TraceRecord parse_trace_line(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    TraceRecord r;
    r.t = j.at("t").get<std::size_t>();
    r.i = j.at("i").get<ResourceId>();
    r.price = j.at("price").get<double>();
    r.paid = j.at("paid").get<double>();
    if (j.contains("tau1")) r.tau1 = j["tau1"].get<double>();
    if (j.contains("tau2")) r.tau2 = j["tau2"].get<double>();
    return r;
}

} // namespace adwords
