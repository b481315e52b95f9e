#include "argex/qbaf.hpp"
#include "argex/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace argex {

using nlohmann::json;

std::string variant_name(Variant v) {
    return v == Variant::TopDown ? "top_down" : "bottom_up";
}

Variant variant_from_name(const std::string& name) {
    if (name == "top_down") return Variant::TopDown;
    if (name == "bottom_up") return Variant::BottomUp;
    throw std::runtime_error("unknown variant '" + name + "'");
}

int Qbafc::delta_index() const {
    for (size_t i = 0; i < arguments.size(); ++i) {
        if (arguments[i].is_default()) return static_cast<int>(i);
    }
    throw std::logic_error("framework has no default argument");
}

std::vector<int> Qbafc::out_degrees() const {
    std::vector<int> deg(arguments.size(), 0);
    for (const auto& [src, dst] : attacks) ++deg[src];
    for (const auto& [src, dst] : supports) ++deg[src];
    return deg;
}

std::vector<std::vector<int>> Qbafc::attackers_of() const {
    std::vector<std::vector<int>> in(arguments.size());
    for (const auto& [src, dst] : attacks) in[dst].push_back(src);
    for (auto& v : in) std::sort(v.begin(), v.end());
    return in;
}

std::vector<std::vector<int>> Qbafc::supporters_of() const {
    std::vector<std::vector<int>> in(arguments.size());
    for (const auto& [src, dst] : supports) in[dst].push_back(src);
    for (auto& v : in) std::sort(v.begin(), v.end());
    return in;
}

void Qbafc::sort_edges() {
    std::sort(attacks.begin(), attacks.end());
    std::sort(supports.begin(), supports.end());
}

namespace {

// Kahn's algorithm picking the smallest argument index first. Returns an
// empty vector when a cycle prevents a full ordering.
std::vector<int> topological_order(const Qbafc& fw) {
    size_t n = fw.size();
    std::vector<int> in_degree(n, 0);
    std::vector<std::vector<int>> succ(n);
    auto add_edge = [&](int src, int dst) {
        succ[src].push_back(dst);
        ++in_degree[dst];
    };
    for (const auto& [src, dst] : fw.attacks) add_edge(src, dst);
    for (const auto& [src, dst] : fw.supports) add_edge(src, dst);

    std::vector<bool> done(n, false);
    std::vector<int> order;
    order.reserve(n);
    for (size_t step = 0; step < n; ++step) {
        int pick = -1;
        for (size_t i = 0; i < n; ++i) {
            if (!done[i] && in_degree[i] == 0) {
                pick = static_cast<int>(i);
                break;
            }
        }
        if (pick < 0) return {}; // cycle
        done[pick] = true;
        order.push_back(pick);
        for (int dst : succ[pick]) --in_degree[dst];
    }
    return order;
}

} // namespace

void validate_structure(const Qbafc& fw) {
    size_t n = fw.size();
    int defaults = 0;
    for (const auto& arg : fw.arguments) {
        if (arg.is_default()) ++defaults;
        if (arg.supported_class != 0 && arg.supported_class != 1) {
            throw std::logic_error("argument " + arg.id() + " has class outside {0,1}");
        }
        if (!fw.post_processed && arg.tau < 0.0) {
            throw std::logic_error("argument " + arg.id() + " has negative base score");
        }
    }
    if (defaults != 1) {
        throw std::logic_error("framework must contain exactly one default argument");
    }
    auto check_edges = [&](const std::vector<std::pair<int, int>>& edges, bool is_attack) {
        for (const auto& [src, dst] : edges) {
            if (src < 0 || dst < 0 || src >= static_cast<int>(n) || dst >= static_cast<int>(n)) {
                throw std::logic_error("edge endpoint out of range");
            }
            if (fw.arguments[src].is_default()) {
                throw std::logic_error("default argument has an outgoing edge");
            }
            bool same_class =
                fw.arguments[src].supported_class == fw.arguments[dst].supported_class;
            if (is_attack == same_class) {
                throw std::logic_error("edge polarity inconsistent with endpoint classes");
            }
        }
    };
    check_edges(fw.attacks, true);
    check_edges(fw.supports, false);
    for (const auto& e : fw.attacks) {
        if (std::binary_search(fw.supports.begin(), fw.supports.end(), e)) {
            throw std::logic_error("edge present in both attacks and supports");
        }
    }
    if (topological_order(fw).empty() && n > 0) {
        throw std::logic_error("framework graph contains a cycle");
    }
}

Qbafc build_qbafc(const PlrModel& model, const Document& doc, Variant variant) {
    model.validate();
    FeatureVector f = extract_features(model, doc);

    Qbafc fw;
    fw.variant = variant;
    std::vector<int> present;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i]) present.push_back(static_cast<int>(i));
    }
    for (int i : present) {
        Argument arg;
        arg.pattern_index = i;
        arg.tau = std::abs(model.weights[i]);
        arg.supported_class = model.weights[i] >= 0.0 ? 1 : 0;
        fw.arguments.push_back(arg);
    }
    Argument delta;
    delta.pattern_index = -1;
    delta.tau = std::abs(model.bias);
    delta.supported_class = model.bias >= 0.0 ? 1 : 0;
    fw.arguments.push_back(delta);

    size_t m = present.size();
    int delta_pos = static_cast<int>(m);
    // strict[a][b]: pattern of local argument a strictly more specific than b's.
    std::vector<std::vector<bool>> strict(m, std::vector<bool>(m, false));
    for (size_t a = 0; a < m; ++a) {
        for (size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            strict[a][b] =
                strictly_more_specific(model.patterns[present[a]], model.patterns[present[b]]);
        }
    }
    auto has_intermediate = [&](size_t a, size_t b) {
        for (size_t k = 0; k < m; ++k) {
            if (k != a && k != b && strict[a][k] && strict[k][b]) return true;
        }
        return false;
    };

    auto add_edge = [&](int src, int dst) {
        bool same =
            fw.arguments[src].supported_class == fw.arguments[dst].supported_class;
        (same ? fw.supports : fw.attacks).emplace_back(src, dst);
    };

    for (size_t a = 0; a < m; ++a) {
        bool specializes_some = false; // exists b with p_a strictly more specific
        bool generalizes_some = false; // exists b strictly more specific than p_a
        for (size_t b = 0; b < m; ++b) {
            if (strict[a][b]) specializes_some = true;
            if (strict[b][a]) generalizes_some = true;
        }
        if (variant == Variant::TopDown) {
            if (!specializes_some) add_edge(static_cast<int>(a), delta_pos);
        } else {
            if (!generalizes_some) add_edge(static_cast<int>(a), delta_pos);
        }
    }
    for (size_t a = 0; a < m; ++a) {
        for (size_t b = 0; b < m; ++b) {
            if (!strict[a][b] || has_intermediate(a, b)) continue;
            if (variant == Variant::TopDown) {
                add_edge(static_cast<int>(a), static_cast<int>(b)); // specific -> general
            } else {
                add_edge(static_cast<int>(b), static_cast<int>(a)); // general -> specific
            }
        }
    }
    fw.sort_edges();
    return fw;
}

StrengthMap compute_strengths(const Qbafc& fw) {
    std::vector<int> order = topological_order(fw);
    if (order.empty() && fw.size() > 0) {
        throw std::logic_error("cannot compute strengths: framework graph has a cycle");
    }
    std::vector<int> nu = fw.out_degrees();
    auto attackers = fw.attackers_of();
    auto supporters = fw.supporters_of();

    StrengthMap sigma(fw.size(), 0.0);
    for (int node : order) {
        double support_sum = 0.0;
        for (int b : supporters[node]) support_sum += sigma[b] / nu[b];
        double attack_sum = 0.0;
        for (int b : attackers[node]) attack_sum += sigma[b] / nu[b];
        sigma[node] = fw.arguments[node].tau + support_sum - attack_sum;
    }
    return sigma;
}

std::pair<Qbafc, StrengthMap> postprocess(const Qbafc& fw, const StrengthMap& s) {
    if (fw.post_processed) {
        throw std::invalid_argument("framework is already post-processed");
    }
    if (s.size() != fw.size()) {
        throw std::invalid_argument("strength map does not match framework");
    }
    Qbafc out;
    out.variant = fw.variant;
    out.post_processed = true;
    out.arguments = fw.arguments;
    for (size_t i = 0; i < out.arguments.size(); ++i) {
        if (s[i] < 0.0) {
            out.arguments[i].tau = -out.arguments[i].tau;
            out.arguments[i].supported_class = 1 - out.arguments[i].supported_class;
        }
    }
    auto relabel = [&](const std::vector<std::pair<int, int>>& edges) {
        for (const auto& [src, dst] : edges) {
            if (s[src] == 0.0) continue; // exact-zero sources contribute nothing
            bool same =
                out.arguments[src].supported_class == out.arguments[dst].supported_class;
            (same ? out.supports : out.attacks).emplace_back(src, dst);
        }
    };
    relabel(fw.attacks);
    relabel(fw.supports);
    out.sort_edges();
    return {std::move(out), compute_strengths(out)};
}

std::vector<bool> flipped_classes(const StrengthMap& pre_strengths) {
    std::vector<bool> flipped(pre_strengths.size());
    for (size_t i = 0; i < pre_strengths.size(); ++i) flipped[i] = pre_strengths[i] < 0.0;
    return flipped;
}

Prediction inferred_prediction(const Qbafc& fw, const StrengthMap& s) {
    if (s.size() != fw.size()) {
        throw std::invalid_argument("strength map does not match framework");
    }
    int d = fw.delta_index();
    double sd = s[d];
    int cd = fw.arguments[d].supported_class;
    Prediction pred;
    if (sd > 0.0) {
        pred.predicted_class = cd;
        pred.probability = sigmoid(sd);
    } else if (sd < 0.0) {
        pred.predicted_class = 1 - cd;
        pred.probability = sigmoid(-sd);
    } else {
        pred.predicted_class = 1; // P = 0.5 ties resolve to class 1
        pred.probability = 0.5;
    }
    return pred;
}

std::string qbafc_to_json_text(const Qbafc& fw, const StrengthMap* sigma) {
    json obj;
    obj["variant"] = variant_name(fw.variant);
    obj["post_processed"] = fw.post_processed;
    json args = json::array();
    for (const auto& arg : fw.arguments) {
        json a;
        a["id"] = arg.id();
        a["origin"] = arg.is_default() ? json("default") : json(arg.pattern_index);
        a["tau"] = format_double(arg.tau);
        a["class"] = arg.supported_class;
        args.push_back(std::move(a));
    }
    obj["arguments"] = std::move(args);
    auto edge_array = [&](const std::vector<std::pair<int, int>>& edges) {
        json arr = json::array();
        for (const auto& [src, dst] : edges) {
            arr.push_back(json::array({fw.arguments[src].id(), fw.arguments[dst].id()}));
        }
        return arr;
    };
    obj["attacks"] = edge_array(fw.attacks);
    obj["supports"] = edge_array(fw.supports);
    if (sigma) {
        json sig = json::object();
        for (size_t i = 0; i < fw.arguments.size(); ++i) {
            sig[fw.arguments[i].id()] = format_double((*sigma)[i]);
        }
        obj["sigma"] = std::move(sig);
    }
    return obj.dump(2);
}

Qbafc qbafc_from_json_text(const std::string& text, StrengthMap* sigma_out) {
    json obj = json::parse(text);
    Qbafc fw;
    fw.variant = variant_from_name(obj.at("variant").get<std::string>());
    fw.post_processed = obj.at("post_processed").get<bool>();
    std::unordered_map<std::string, int> index_of;
    for (const auto& a : obj.at("arguments")) {
        Argument arg;
        const auto& origin = a.at("origin");
        arg.pattern_index = origin.is_string() ? -1 : origin.get<int>();
        const auto& tau = a.at("tau");
        arg.tau = tau.is_string() ? parse_double(tau.get<std::string>()) : tau.get<double>();
        arg.supported_class = a.at("class").get<int>();
        index_of[a.at("id").get<std::string>()] = static_cast<int>(fw.arguments.size());
        fw.arguments.push_back(arg);
    }
    auto read_edges = [&](const json& arr, std::vector<std::pair<int, int>>& edges) {
        for (const auto& pair : arr) {
            edges.emplace_back(index_of.at(pair.at(0).get<std::string>()),
                               index_of.at(pair.at(1).get<std::string>()));
        }
    };
    read_edges(obj.at("attacks"), fw.attacks);
    read_edges(obj.at("supports"), fw.supports);
    fw.sort_edges();
    if (sigma_out && obj.contains("sigma")) {
        sigma_out->assign(fw.size(), 0.0);
        for (size_t i = 0; i < fw.arguments.size(); ++i) {
            const auto& v = obj["sigma"].at(fw.arguments[i].id());
            (*sigma_out)[i] =
                v.is_string() ? parse_double(v.get<std::string>()) : v.get<double>();
        }
    }
    return fw;
}

std::string qbafc_to_dot(const Qbafc& fw, const StrengthMap* sigma,
                         const std::vector<std::string>* labels) {
    std::string out = "digraph qbafc {\n  rankdir=BT;\n  node [style=filled];\n";
    for (size_t i = 0; i < fw.arguments.size(); ++i) {
        const auto& arg = fw.arguments[i];
        std::string label = arg.id();
        if (labels && i < labels->size() && !(*labels)[i].empty()) {
            label += "\\n" + (*labels)[i];
        }
        label += "\\ntau=" + format_double(arg.tau);
        if (sigma) label += "\\nsigma=" + format_double((*sigma)[i]);
        out += "  \"" + arg.id() + "\" [label=\"" + label + "\" fillcolor=\"" +
               (arg.supported_class == 1 ? "palegreen" : "lightcoral") + "\"];\n";
    }
    auto emit = [&](const std::vector<std::pair<int, int>>& edges, const char* sign) {
        for (const auto& [src, dst] : edges) {
            out += "  \"" + fw.arguments[src].id() + "\" -> \"" + fw.arguments[dst].id() +
                   "\" [label=\"" + sign + "\"];\n";
        }
    };
    emit(fw.attacks, "-");
    emit(fw.supports, "+");
    out += "}\n";
    return out;
}

} // namespace argex
