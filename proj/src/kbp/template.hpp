#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace kbp {

inline constexpr std::string_view kSubjectPlaceholder = "{X}";
inline constexpr std::string_view kObjectPlaceholder = "{Y}";
inline constexpr std::string_view kMaskPlaceholder = "{MASK}";

/// Substitutes {X} with subject and {Y} with object. {MASK} is left in place
/// for the mask-fill backend. Any other {NAME} placeholder, a missing {X}, a
/// {Y} without an object, or an object without a {Y} is a TemplateError.
/// Substituted text is never re-scanned.
std::string render_template(std::string_view tmpl, std::string_view subject,
                            const std::optional<std::string>& object = std::nullopt);

std::size_t count_placeholder(std::string_view tmpl, std::string_view placeholder);

}  // namespace kbp
