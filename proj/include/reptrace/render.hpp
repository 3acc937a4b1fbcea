#pragma once
// Text rendering of explanations through named-placeholder templates.
//
// Template syntax: {{name}} inserts a bound value; {{#name}}...{{/name}}
// keeps its body only when the value bound to `name` is non-empty. Template
// files hold one `kind = template` entry per line; '#' starts a comment.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "reptrace/explain.hpp"

namespace reptrace::render {

class TemplateSet {
public:
    /// The shipped default set.
    static TemplateSet defaults();
    /// Parses a template file. Throws SchemaError on a malformed or incomplete set.
    static TemplateSet parse(std::istream& is);

    const std::string& get(std::string_view kind) const;
    void set(std::string kind, std::string text);
    const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

/// Argument kinds a complete TemplateSet must cover.
const std::vector<std::string_view>& template_kinds();

/// Display name of a reputation type in prose ("own interaction", ...).
std::string_view display_name(ReputationType type);

/// "a", "a, and b", "a, b, and c".
std::string join_list(const std::vector<std::string>& items);

/// Substitutes placeholders; throws ConfigError on an unbound placeholder.
std::string fill(std::string_view templ, const std::map<std::string, std::string>& values);

/// One sentence block per argument (one per swap for permutations), joined
/// by newlines. Throws UnknownAgent when a provider has no display name.
std::string render_text(const explain::Explanation& explanation,
                        const std::map<AgentId, std::string>& names,
                        const TemplateSet& templates = TemplateSet::defaults());

/// Uses each agent id as its display name.
std::string render_text(const explain::Explanation& explanation,
                        const TemplateSet& templates = TemplateSet::defaults());

}  // namespace reptrace::render
