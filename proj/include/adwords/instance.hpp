#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core.hpp"

namespace adwords {

struct Resource {
    ResourceId id = 0;
    double budget = 0.0; // units of demand
    double reward = 1.0; // reward per unit consumed

    friend bool operator==(const Resource&, const Resource&) = default;
};

/// One online arrival. Arrival t (1-based) is the t-th entry of Instance::arrivals().
struct Arrival {
    std::vector<double> bids; // one entry per resource, 0 means no edge

    double bid(ResourceId i) const { return bids[i]; }

    friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// A validated OBA market. Immutable once constructed.
class Instance {
public:
    Instance() = default;

    Instance(std::string label, std::vector<Resource> resources, std::vector<Arrival> arrivals,
             bool hiddenBudgets = false)
        : label_(std::move(label)), resources_(std::move(resources)),
          arrivals_(std::move(arrivals)), hidden_(hiddenBudgets) {
        validate();
    }

    const std::string& label() const noexcept { return label_; }
    std::span<const Resource> resources() const noexcept { return resources_; }
    std::span<const Arrival> arrivals() const noexcept { return arrivals_; }
    const Resource& resource(ResourceId i) const { return resources_[i]; }
    const Arrival& arrival(std::size_t t) const { return arrivals_[t - 1]; }

    std::size_t num_resources() const noexcept { return resources_.size(); }
    std::size_t num_arrivals() const noexcept { return arrivals_.size(); }

    /// b_{it} with 1-based t.
    double bid(ResourceId i, std::size_t t) const { return arrivals_[t - 1].bids[i]; }
    /// Time-extended bid b_{i tau} for tau in [1, T+1).
    double bid_at(ResourceId i, double tau) const {
        auto t = static_cast<std::size_t>(std::floor(tau));
        return bid(i, t);
    }

    double budget(ResourceId i) const { return resources_[i].budget; }
    double reward(ResourceId i) const { return resources_[i].reward; }
    double max_bid(ResourceId i) const {
        double m = 0.0;
        for (const auto& a : arrivals_) m = std::max(m, a.bids[i]);
        return m;
    }

    /// Bid-to-budget ratio max_{i,t} b_{it} / B_i.
    double gamma() const noexcept { return gamma_; }
    bool hidden_budgets() const noexcept { return hidden_; }

    /// Copy with the hidden flag cleared, for offline analysis and budget-aware policies.
    Instance revealed() const {
        Instance c = *this;
        c.hidden_ = false;
        return c;
    }

    Instance with_budgets(std::vector<double> budgets, std::string label) const {
        auto res = resources_;
        for (std::size_t i = 0; i < res.size(); ++i) res[i].budget = budgets.at(i);
        return Instance(std::move(label), std::move(res), arrivals_, hidden_);
    }

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.label_ == b.label_ && a.resources_ == b.resources_ &&
               a.arrivals_ == b.arrivals_ && a.hidden_ == b.hidden_;
    }

private:
    void validate() {
        const std::size_t n = resources_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& r = resources_[i];
            const std::string f = "resources[" + std::to_string(i) + "]";
            if (r.id != i) throw SchemaError(f + ".id", "ids must be contiguous 0..n-1");
            if (!std::isfinite(r.budget) || r.budget < 0.0)
                throw SchemaError(f + ".budget", "must be finite and >= 0");
            if (!std::isfinite(r.reward) || r.reward < 0.0)
                throw SchemaError(f + ".reward", "must be finite and >= 0");
        }
        gamma_ = 0.0;
        for (std::size_t t = 0; t < arrivals_.size(); ++t) {
            const auto& a = arrivals_[t];
            const std::string f = "arrivals[" + std::to_string(t) + "].bids";
            if (a.bids.size() != n)
                throw SchemaError(f, "length " + std::to_string(a.bids.size()) +
                                         " does not match resource count " + std::to_string(n));
            for (std::size_t i = 0; i < n; ++i) {
                const double b = a.bids[i];
                const std::string fi = f + "[" + std::to_string(i) + "]";
                if (!std::isfinite(b) || b < 0.0) throw SchemaError(fi, "bid must be finite and >= 0");
                if (b > 0.0) {
                    if (resources_[i].budget <= 0.0)
                        throw SchemaError(fi, "positive bid on a zero-budget resource");
                    gamma_ = std::max(gamma_, b / resources_[i].budget);
                }
            }
        }
    }

    std::string label_;
    std::vector<Resource> resources_;
    std::vector<Arrival> arrivals_;
    bool hidden_ = false;
    double gamma_ = 0.0;
};

/// Per-resource seeds y_i in [0,1].
class SeedVector {
public:
    SeedVector() = default;
    explicit SeedVector(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!(values_[i] >= 0.0 && values_[i] <= 1.0))
                throw PreconditionError("seed y_" + std::to_string(i) + " outside [0,1]");
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](ResourceId i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    /// (y_i, Y_{-i}): this vector with entry i replaced.
    SeedVector with(ResourceId i, double y) const {
        auto v = values_;
        v.at(i) = y;
        return SeedVector(std::move(v));
    }

    static SeedVector constant(std::size_t n, double y) { return SeedVector(std::vector<double>(n, y)); }

private:
    std::vector<double> values_;
};

inline void require_seed_length(const Instance& inst, const SeedVector& y) {
    if (y.size() != inst.num_resources())
        throw PreconditionError("seed vector has length " + std::to_string(y.size()) +
                                ", instance has " + std::to_string(inst.num_resources()) +
                                " resources");
}

// ---------------------------------------------------------------------------
// JSON I/O

/// Serializes with stable field order (label, resources, arrivals, hiddenBudgets).
inline std::string dump_instance(const Instance& inst, int indent = -1) {
    nlohmann::ordered_json j;
    j["label"] = inst.label();
    auto& res = j["resources"] = nlohmann::ordered_json::array();
    for (const auto& r : inst.resources()) {
        nlohmann::ordered_json e;
        e["id"] = r.id;
        e["budget"] = r.budget;
        e["reward"] = r.reward;
        res.push_back(std::move(e));
    }
    auto& arr = j["arrivals"] = nlohmann::ordered_json::array();
    for (const auto& a : inst.arrivals()) {
        nlohmann::ordered_json e;
        e["bids"] = a.bids;
        arr.push_back(std::move(e));
    }
    j["hiddenBudgets"] = inst.hidden_budgets();
    return j.dump(indent);
}

namespace detail {

template <class Json>
const Json& require_field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(path + "." + key, "missing field");
    return j.at(key);
}

template <class Json>
double require_number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.template get<double>();
}

} // namespace detail

inline Instance instance_from_json(const nlohmann::json& j) {
    using detail::require_field;
    using detail::require_number;
    if (!j.is_object()) throw SchemaError("$", "instance must be a JSON object");
    const auto& label = require_field(j, "label", "$");
    if (!label.is_string()) throw SchemaError("$.label", "expected a string");

    const auto& jres = require_field(j, "resources", "$");
    if (!jres.is_array()) throw SchemaError("$.resources", "expected an array");
    std::vector<Resource> resources;
    for (std::size_t i = 0; i < jres.size(); ++i) {
        const std::string p = "$.resources[" + std::to_string(i) + "]";
        const auto& e = jres[i];
        const auto& id = require_field(e, "id", p);
        if (!id.is_number_integer() || id.get<long long>() < 0)
            throw SchemaError(p + ".id", "expected a nonnegative integer");
        Resource r;
        r.id = id.get<std::size_t>();
        r.budget = require_number(require_field(e, "budget", p), p + ".budget");
        r.reward = require_number(require_field(e, "reward", p), p + ".reward");
        resources.push_back(r);
    }

    const auto& jarr = require_field(j, "arrivals", "$");
    if (!jarr.is_array()) throw SchemaError("$.arrivals", "expected an array");
    std::vector<Arrival> arrivals;
    arrivals.reserve(jarr.size());
    for (std::size_t t = 0; t < jarr.size(); ++t) {
        const std::string p = "$.arrivals[" + std::to_string(t) + "]";
        const auto& bids = require_field(jarr[t], "bids", p);
        if (!bids.is_array()) throw SchemaError(p + ".bids", "expected an array");
        Arrival a;
        a.bids.reserve(bids.size());
        for (std::size_t i = 0; i < bids.size(); ++i)
            a.bids.push_back(require_number(bids[i], p + ".bids[" + std::to_string(i) + "]"));
        arrivals.push_back(std::move(a));
    }

    bool hidden = false;
    if (j.contains("hiddenBudgets")) {
        if (!j["hiddenBudgets"].is_boolean()) throw SchemaError("$.hiddenBudgets", "expected a bool");
        hidden = j["hiddenBudgets"].get<bool>();
    }
    return Instance(label.get<std::string>(), std::move(resources), std::move(arrivals), hidden);
}

inline Instance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("$", std::string("malformed JSON: ") + e.what());
    }
    return instance_from_json(j);
}

inline Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

inline void save_instance(const Instance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write instance file " + path.string());
    out << dump_instance(inst) << '\n';
    if (!out) throw Error("I/O failure writing " + path.string());
}

} // namespace adwords
