#include "kbp/template.hpp"

#include "kbp/errors.hpp"

namespace kbp {

namespace {

bool is_placeholder_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Length of a {NAME} placeholder starting at pos, or 0.
std::size_t placeholder_at(std::string_view s, std::size_t pos) {
  if (s[pos] != '{') return 0;
  std::size_t i = pos + 1;
  while (i < s.size() && is_placeholder_char(s[i])) ++i;
  if (i == pos + 1 || i >= s.size() || s[i] != '}') return 0;
  return i - pos + 1;
}

}  // namespace

std::size_t count_placeholder(std::string_view tmpl, std::string_view placeholder) {
  std::size_t n = 0;
  for (std::size_t pos = tmpl.find(placeholder); pos != std::string_view::npos;
       pos = tmpl.find(placeholder, pos + placeholder.size()))
    ++n;
  return n;
}

std::string render_template(std::string_view tmpl, std::string_view subject,
                            const std::optional<std::string>& object) {
  const std::string quoted = "'" + std::string(tmpl) + "'";
  if (count_placeholder(tmpl, kSubjectPlaceholder) == 0)
    throw TemplateError("template " + quoted + " has no {X} placeholder");
  const bool has_object_slot = count_placeholder(tmpl, kObjectPlaceholder) > 0;
  if (has_object_slot && !object) throw TemplateError("template " + quoted + " needs an object for {Y}");
  if (!has_object_slot && object) throw TemplateError("template " + quoted + " has no {Y} for the object");

  std::string out;
  out.reserve(tmpl.size() + subject.size() + (object ? object->size() : 0));
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const std::size_t len = placeholder_at(tmpl, i);
    if (len == 0) {
      out.push_back(tmpl[i++]);
      continue;
    }
    const auto ph = tmpl.substr(i, len);
    if (ph == kSubjectPlaceholder) {
      out.append(subject);
    } else if (ph == kObjectPlaceholder) {
      out.append(*object);
    } else if (ph == kMaskPlaceholder) {
      out.append(ph);
    } else {
      throw TemplateError("template " + quoted + " has unresolved placeholder " + std::string(ph));
    }
    i += len;
  }
  return out;
}

}  // namespace kbp
