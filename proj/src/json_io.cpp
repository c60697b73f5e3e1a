#include "mlogic/json_io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mlogic {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) bad("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
    return *it;
}

int int_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

std::string string_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_string()) bad(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

} // namespace

Json world_to_json(World w) { return Json(w.generators()); }

World world_from_json(const Json& j, int n) {
    if (!j.is_array() || j.empty()) bad("a world is a non-empty list of generators");
    std::vector<int> gens;
    for (const auto& g : j) {
        if (!g.is_number_integer()) bad("generator indices must be integers");
        const int i = g.get<int>();
        if (i < 1 || i > n) bad("generator " + std::to_string(i) + " out of range for M_" + std::to_string(n));
        gens.push_back(i);
    }
    if (!std::is_sorted(gens.begin(), gens.end()) || std::adjacent_find(gens.begin(), gens.end()) != gens.end())
        bad("generator list " + j.dump() + " must be sorted without repeats");
    return World::of(gens);
}

Json valuation_to_json(const Valuation& v) {
    Json out = Json::object();
    for (const auto& [atom, set] : v.entries()) {
        Json list = Json::array();
        for (World w : set.members()) list.push_back(world_to_json(w));
        out[atom] = std::move(list);
    }
    return out;
}

Valuation valuation_from_json(const Json& j, int n) {
    if (!j.is_object()) bad("a valuation is an object from atoms to world lists");
    Valuation v(n);
    for (const auto& [atom, list] : j.items()) {
        if (!is_identifier(atom)) bad("\"" + atom + "\" is not an atom name");
        if (!list.is_array()) bad("the worlds of " + atom + " must be a list");
        WorldSet set(n);
        for (const auto& w : list) set.set(world_from_json(w, n));
        if (!is_upward_closed(set)) bad("the worlds given for " + atom + " are not upward closed");
        v.set(atom, UpSet::from(std::move(set)));
    }
    return v;
}

Json witness_to_json(const RefutationWitness& w) {
    Json out;
    out["n"] = w.n();
    out["valuation"] = valuation_to_json(w.valuation());
    out["world"] = world_to_json(w.world());
    out["formula"] = render(w.formula());
    return out;
}

RefutationWitness witness_from_json(const Json& j) {
    const int n = int_field(j, "n");
    if (n < 1 || n > MedvedevFrame::max_generators) bad("n must be in [1, 20]");
    Valuation v = valuation_from_json(field(j, "valuation"), n);
    const World w = world_from_json(field(j, "world"), n);
    return RefutationWitness(std::move(v), w, parse(string_field(j, "formula")));
}

Json substitution_to_json(const Substitution& s) {
    Json out = Json::object();
    for (const auto& [atom, image] : s.mapping()) out[atom] = render(image);
    return out;
}

Json assignment_to_json(const Assignment& a) {
    Json out = Json::object();
    for (const auto& [atom, value] : a) out[atom] = value;
    return out;
}

Json frame_checks_to_json(const std::vector<FrameCheck>& checks) {
    Json out = Json::array();
    for (const auto& c : checks) {
        Json item;
        item["n"] = c.n;
        item["mode"] = to_string(c.mode);
        item["verdict"] = to_string(c.verdict);
        item["valuations"] = c.valuations;
        out.push_back(std::move(item));
    }
    return out;
}

Json levin_to_json(const LevinDecomposition& d) {
    Json out = witness_to_json(d.refutation);
    out["sigma"] = substitution_to_json(d.sigma);
    out["substituted"] = render(d.sigma_formula);
    out["rank"] = d.bodies.size();
    Json bodies = Json::array();
    for (const auto& b : d.bodies) bodies.push_back(render(b));
    out["bodies"] = std::move(bodies);
    Json models = Json::array();
    for (const auto& a : d.countermodels) models.push_back(assignment_to_json(a));
    out["countermodels"] = std::move(models);
    out["equivalence"] = frame_checks_to_json(d.equivalence);
    return out;
}

Json admissibility_to_json(const AdmissibilityWitness& w) {
    Json out;
    out["n"] = w.k;
    out["valuation"] = valuation_to_json(w.v);
    out["world"] = world_to_json(MedvedevFrame(w.k).bottom());
    out["formula"] = render(w.conclusion);
    out["premise"] = render(w.premise);
    out["found"] = Json{{"n", w.found_n}, {"world", world_to_json(w.found_world)}};
    out["sigma"] = substitution_to_json(w.sigma);
    out["refutation"] = witness_to_json(w.refutation);
    out["substituted_premise"] = render(apply_subst(w.sigma, w.premise));
    out["validity_evidence"] = frame_checks_to_json(w.validity_evidence);
    return out;
}

Json pmorphism_to_json(const PMorphism& f) {
    Json out;
    out["source"] = f.source;
    out["target"] = f.target;
    Json map = Json::array();
    for (std::uint32_t x = 1; x < f.image.size(); ++x)
        map.push_back(Json{{"world", world_to_json(World{x})}, {"image", world_to_json(World{f.image[x]})}});
    out["map"] = std::move(map);
    return out;
}

PMorphism pmorphism_from_json(const Json& j) {
    const int m = int_field(j, "source");
    const int n = int_field(j, "target");
    if (m < 1 || m > MedvedevFrame::max_generators || n < 1 || n > MedvedevFrame::max_generators)
        bad("source and target must be in [1, 20]");
    const Json& map = field(j, "map");
    if (!map.is_array()) bad("\"map\" must be a list");

    std::vector<std::uint32_t> image(std::size_t{1} << m, 0);
    std::size_t given = 0;
    bool only_maximal = true;
    for (const auto& entry : map) {
        const World x = world_from_json(field(entry, "world"), m);
        const World y = world_from_json(field(entry, "image"), n);
        if (image[x.mask]) bad(to_string(x) + " is mapped twice");
        image[x.mask] = y.mask;
        ++given;
        if (x.generator_count() != 1) only_maximal = false;
    }
    if (given == image.size() - 1) return PMorphism{m, n, std::move(image)};
    if (only_maximal && given == static_cast<std::size_t>(m)) {
        std::vector<int> targets;
        for (int i = 0; i < m; ++i) {
            const std::uint32_t y = image[std::uint32_t{1} << i];
            if (std::popcount(y) != 1) bad("a maximal world must map to a maximal world when only those are listed");
            targets.push_back(std::countr_zero(y) + 1);
        }
        return PMorphism::from_maximal(m, n, targets);
    }
    bad("the map must list every world of M_" + std::to_string(m) + " or exactly its maximal worlds");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        bad(path + ": " + e.what());
    }
}

} // namespace mlogic
