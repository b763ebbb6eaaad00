#include "peaklab/domain_spec.hpp"

#include <fstream>

#include "peaklab/json_util.hpp"
#include "peaklab/rng.hpp"

namespace peaklab::cli {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name, const std::string& path) {
    auto it = j.find(name);
    if (it == j.end()) throw InputError(path + "." + name + ": missing");
    return *it;
}

int int_field(const json& j, const char* name, const std::string& path) {
    const json& f = field(j, name, path);
    if (!f.is_number_integer()) throw InputError(path + "." + name + ": expected an integer");
    return f.get<int>();
}

} // namespace

DomainSpec DomainSpec::from_json(const json& j) {
    if (!j.is_object()) throw InputError("$: expected a JSON object");
    const json& t = field(j, "type", "$");
    if (!t.is_string()) throw InputError("$.type: expected a string");
    const std::string type = t.get<std::string>();
    DomainSpec spec;
    try {
        if (type == "symmetrized_polydisc") {
            spec.type_ = Type::SymmetrizedPolydisc;
            spec.n_ = int_field(j, "n", "$");
            if (spec.n_ < 1) throw InputError("$.n: must be >= 1");
        } else if (type == "polydisc") {
            spec.type_ = Type::Polydisc;
            spec.n_ = int_field(j, "n", "$");
            if (spec.n_ < 1) throw InputError("$.n: must be >= 1");
        } else if (type == "reinhardt") {
            spec.type_ = Type::Reinhardt;
            const json& pieces = field(j, "pieces", "$");
            if (!pieces.is_array() || pieces.empty())
                throw InputError("$.pieces: expected a non-empty array");
            std::vector<reinhardt::LogPolyhedron> ps;
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                const std::string path = "$.pieces[" + std::to_string(i) + "]";
                const json& pj = pieces[i];
                const json& aj = field(pj, "A", path);
                const json& bj = field(pj, "b", path);
                if (!aj.is_array() || !bj.is_array())
                    throw InputError(path + ": A and b must be arrays");
                rmat a;
                for (const auto& row : aj) a.push_back(row.get<rvec>());
                ps.emplace_back(a, bj.get<rvec>());
            }
            const json& axes = field(j, "meets_axes", "$");
            std::vector<bool> flags;
            for (const auto& b : axes) flags.push_back(b.get<bool>());
            spec.reinhardt_.emplace(std::move(ps), std::move(flags));
            spec.n_ = spec.reinhardt_->dim();
        } else if (type == "convex") {
            spec.type_ = Type::Convex;
            spec.convex_.emplace(cconvex::ConvexBody::from_json(j));
            spec.n_ = spec.convex_->complex_dim();
        } else {
            throw InputError("$.type: unknown domain type '" + type + "'");
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("$: malformed domain spec (") + e.what() + ")");
    } catch (const DomainViolation& e) {
        throw InputError(std::string("$: invalid domain (") + e.what() + ")");
    }
    return spec;
}

DomainSpec DomainSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open domain spec file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError(path + ": JSON parse error: " + e.what());
    }
    return from_json(j);
}

int DomainSpec::dim() const { return n_; }

json DomainSpec::to_json() const {
    switch (type_) {
    case Type::SymmetrizedPolydisc: return json{{"type", "symmetrized_polydisc"}, {"n", n_}};
    case Type::Polydisc: return json{{"type", "polydisc"}, {"n", n_}};
    case Type::Reinhardt: return reinhardt_->to_json();
    case Type::Convex: return convex_->to_json();
    }
    return {};
}

const reinhardt::ReinhardtDomain& DomainSpec::reinhardt_domain() const {
    if (!reinhardt_) throw DomainViolation("DomainSpec: not a Reinhardt domain");
    return *reinhardt_;
}

const cconvex::ConvexBody& DomainSpec::convex_body() const {
    if (!convex_) throw DomainViolation("DomainSpec: not a convex body");
    return *convex_;
}

std::vector<cvec> DomainSpec::sample_interior(int count, std::uint64_t seed) const {
    switch (type_) {
    case Type::SymmetrizedPolydisc:
        return sympoly::sample_interior(n_, count, seed).points;
    case Type::Polydisc: {
        DetRng rng(seed);
        std::vector<cvec> out;
        for (int i = 0; i < count; ++i) {
            cvec z(static_cast<std::size_t>(n_));
            for (auto& c : z) c = rng.unit_disc();
            out.push_back(std::move(z));
        }
        return out;
    }
    case Type::Reinhardt: {
        auto logs = reinhardt::sample_log_points(*reinhardt_, count, seed);
        DetRng rng(seed ^ 0x9E3779B97F4A7C15ULL);
        std::vector<cvec> out;
        for (const rvec& x : logs) {
            cvec z(x.size());
            for (std::size_t jx = 0; jx < x.size(); ++jx)
                z[jx] = std::exp(x[jx]) * rng.unit_circle();
            out.push_back(std::move(z));
        }
        return out;
    }
    case Type::Convex:
        return convex_->sample_interior(count, seed);
    }
    return {};
}

transfer::PointSampler DomainSpec::sampler() const {
    DomainSpec copy = *this;
    return [copy](int count, std::uint64_t seed) { return copy.sample_interior(count, seed); };
}

} // namespace peaklab::cli
