#include "reptrace/render.hpp"

#include <cstdio>
#include <istream>
#include <sstream>

namespace reptrace::render {

namespace {

std::string two_decimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> term_names(const std::vector<Term>& terms) {
    std::vector<std::string> out;
    for (const auto& t : terms) out.push_back(t.name());
    return out;
}

}  // namespace

const std::vector<std::string_view>& template_kinds() {
    static const std::vector<std::string_view> kinds = {
        "decisive_dominance", "decisive_tradeoff",  "type_permutation",
        "fire_recency_global", "fire_recency_local", "travos_low_confidence"};
    return kinds;
}

TemplateSet TemplateSet::defaults() {
    TemplateSet t;
    t.set("decisive_dominance",
          "{{preferred}} has a better reputation than {{other}}, because it is better in all "
          "aspects that you consider in your preferences, mainly with respect to {{pros}}.");
    t.set("decisive_tradeoff",
          "{{preferred}} has a better reputation than {{other}}, mainly due to {{pros}}"
          "{{#cons}}, even though {{other}} provides better {{cons}}{{/cons}}.");
    t.set("fire_recency_global",
          "In addition, {{other}} has, on average, higher ratings than {{preferred}}, but "
          "{{preferred}} has been recently receiving higher ratings than {{other}}, which are "
          "more valuable.");
    t.set("type_permutation",
          "Considering {{term}}, even though {{other}} has a higher trust value considering "
          "{{less_important}}, which is less important, {{preferred}} has a higher trust value "
          "considering {{more_important}}, which is more important.");
    t.set("travos_low_confidence",
          "Moreover, although you have had limited previous interactions with either "
          "{{preferred}} or {{other}} with respect to {{term}}, the former is considered better "
          "than the latter by witnesses.");
    t.set("fire_recency_local",
          "Moreover, {{other}} has, on average, higher ratings for {{term}} than {{preferred}}, "
          "considering {{rep_type}}, but {{preferred}} has been recently receiving higher ratings "
          "than {{other}}, which are more valuable.");
    return t;
}

TemplateSet TemplateSet::parse(std::istream& is) {
    TemplateSet t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::SchemaError,
                        "template line " + std::to_string(lineno) + " lacks '='");
        }
        std::string kind = trim(std::string_view(stripped).substr(0, eq));
        std::string text = trim(std::string_view(stripped).substr(eq + 1));
        if (t.entries_.contains(kind)) {
            throw Error(ErrorCode::SchemaError, "duplicate template for '" + kind + "'");
        }
        t.set(std::move(kind), std::move(text));
    }
    for (auto kind : template_kinds()) {
        if (!t.entries_.contains(kind)) {
            throw Error(ErrorCode::SchemaError, "missing template for '" + std::string(kind) + "'");
        }
    }
    return t;
}

const std::string& TemplateSet::get(std::string_view kind) const {
    auto it = entries_.find(kind);
    if (it == entries_.end()) {
        throw Error(ErrorCode::ConfigError, "no template for '" + std::string(kind) + "'");
    }
    return it->second;
}

void TemplateSet::set(std::string kind, std::string text) { entries_[std::move(kind)] = std::move(text); }

std::string_view display_name(ReputationType type) {
    switch (type) {
        case ReputationType::Interaction: return "own interaction";
        case ReputationType::Witness: return "witness reputation";
        case ReputationType::RoleBased: return "role-based reputation";
        case ReputationType::Certified: return "certified reputation";
    }
    return "own interaction";
}

std::string join_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += (i + 1 == items.size()) ? ", and " : ", ";
        out += items[i];
    }
    return out;
}

std::string fill(std::string_view templ, const std::map<std::string, std::string>& values) {
    auto lookup = [&](const std::string& name) -> const std::string& {
        auto it = values.find(name);
        if (it == values.end()) {
            throw Error(ErrorCode::ConfigError, "unbound placeholder '" + name + "'");
        }
        return it->second;
    };
    std::string out;
    std::size_t pos = 0;
    while (pos < templ.size()) {
        const auto open = templ.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(templ.substr(pos));
            break;
        }
        out.append(templ.substr(pos, open - pos));
        const auto close = templ.find("}}", open);
        if (close == std::string_view::npos) {
            throw Error(ErrorCode::ConfigError, "unterminated placeholder");
        }
        std::string name(templ.substr(open + 2, close - open - 2));
        pos = close + 2;
        if (!name.empty() && name.front() == '#') {
            name.erase(0, 1);
            const std::string end_tag = "{{/" + name + "}}";
            const auto end = templ.find(end_tag, pos);
            if (end == std::string_view::npos) {
                throw Error(ErrorCode::ConfigError, "unterminated section '" + name + "'");
            }
            if (!lookup(name).empty()) out += fill(templ.substr(pos, end - pos), values);
            pos = end + end_tag.size();
            continue;
        }
        out += lookup(name);
    }
    return out;
}

std::string render_text(const explain::Explanation& explanation,
                        const std::map<AgentId, std::string>& names, const TemplateSet& templates) {
    auto name_of = [&](const AgentId& id) -> const std::string& {
        auto it = names.find(id);
        if (it == names.end()) throw Error(ErrorCode::UnknownAgent, "no display name for '" + id.str() + "'");
        return it->second;
    };
    const std::map<std::string, std::string> base = {
        {"preferred", name_of(explanation.preferred)},
        {"other", name_of(explanation.other)},
    };

    std::vector<std::string> blocks;
    for (const auto& argument : explanation.arguments) {
        auto values = base;
        const std::string& templ = templates.get(kind_name(argument));
        if (const auto* d = std::get_if<explain::DecisiveDominance>(&argument)) {
            values["pros"] = join_list(term_names(d->pros));
            values["reference"] = two_decimals(d->reference);
        } else if (const auto* d = std::get_if<explain::DecisiveTradeoff>(&argument)) {
            values["pros"] = join_list(term_names(d->pros));
            values["cons"] = join_list(term_names(d->cons));
        } else if (const auto* p = std::get_if<explain::TypePermutation>(&argument)) {
            values["term"] = p->term.name();
            values["preferred_swapped"] = two_decimals(p->preferred_trust);
            values["other_swapped"] = two_decimals(p->other_trust);
            for (const auto& swap : p->swaps) {
                values["less_important"] = display_name(swap.less_important);
                values["more_important"] = display_name(swap.more_important);
                blocks.push_back(fill(templ, values));
            }
            continue;
        } else if (const auto* f = std::get_if<explain::FireRecencyLocal>(&argument)) {
            values["term"] = f->term.name();
            values["rep_type"] = display_name(f->rep_type);
        } else if (const auto* c = std::get_if<explain::TravosLowConfidence>(&argument)) {
            values["term"] = c->term.name();
        }
        blocks.push_back(fill(templ, values));
    }

    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i > 0) out += '\n';
        out += blocks[i];
    }
    return out;
}

std::string render_text(const explain::Explanation& explanation, const TemplateSet& templates) {
    std::map<AgentId, std::string> names = {
        {explanation.preferred, explanation.preferred.str()},
        {explanation.other, explanation.other.str()},
    };
    return render_text(explanation, names, templates);
}

}  // namespace reptrace::render
