#include "xml_dom.hpp"

#include <expat.h>

#include <climits>
#include <memory>

#include "oai/error.hpp"
#include "text_util.hpp"

namespace oai::detail {

std::string_view XmlNode::local_name() const noexcept { return local_part(name); }

const XmlNode* XmlNode::child(std::string_view local) const noexcept {
  for (const auto& c : children) {
    if (c.local_name() == local) return &c;
  }
  return nullptr;
}

std::optional<std::string_view> XmlNode::attribute(std::string_view local) const noexcept {
  for (const auto& [key, value] : attributes) {
    if (local_part(key) == local) return std::string_view(value);
  }
  return std::nullopt;
}

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  XmlNode root;
  bool have_root = false;
  std::vector<XmlNode*> stack;
  std::vector<std::size_t> start_tag_length;
  bool saw_doctype = false;

  static void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<Builder*>(user);
    XmlNode* node = nullptr;
    if (self->stack.empty()) {
      node = &self->root;
      self->have_root = true;
    } else {
      node = &self->stack.back()->children.emplace_back();
    }
    node->name = name;
    for (std::size_t i = 0; atts[i] != nullptr; i += 2) {
      node->attributes.emplace_back(atts[i], atts[i + 1]);
    }
    node->begin = static_cast<std::size_t>(XML_GetCurrentByteIndex(self->parser));
    self->start_tag_length.push_back(static_cast<std::size_t>(XML_GetCurrentByteCount(self->parser)));
    self->stack.push_back(node);
  }

  static void on_end(void* user, const XML_Char*) {
    auto* self = static_cast<Builder*>(user);
    XmlNode* node = self->stack.back();
    const auto count = static_cast<std::size_t>(XML_GetCurrentByteCount(self->parser));
    if (count == 0) {
      // <empty/>: the end event shares the start tag's bytes.
      node->end = node->begin + self->start_tag_length.back();
    } else {
      node->end = static_cast<std::size_t>(XML_GetCurrentByteIndex(self->parser)) + count;
    }
    self->start_tag_length.pop_back();
    self->stack.pop_back();
  }

  static void on_text(void* user, const XML_Char* s, int len) {
    auto* self = static_cast<Builder*>(user);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }

  static void on_doctype(void* user, const XML_Char*, const XML_Char*, const XML_Char*, int) {
    auto* self = static_cast<Builder*>(user);
    self->saw_doctype = true;
    XML_StopParser(self->parser, XML_FALSE);
  }
};

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const noexcept { XML_ParserFree(p); }
};

}  // namespace

XmlNode parse_xml(std::string_view document) {
  if (document.size() > static_cast<std::size_t>(INT_MAX)) throw ParseError("document too large");
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw ParseError("cannot allocate XML parser");

  Builder builder;
  builder.parser = parser.get();
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);
  XML_SetStartDoctypeDeclHandler(parser.get(), &Builder::on_doctype);

  const auto status =
      XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE);
  if (builder.saw_doctype) throw ParseError("DOCTYPE declarations are not accepted");
  if (status != XML_STATUS_OK) {
    throw ParseError(std::string("malformed XML at line ") +
                     std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                     XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!builder.have_root) throw ParseError("document has no root element");
  return std::move(builder.root);
}

bool is_single_element(std::string_view fragment) {
  const std::string wrapped = "<w>" + std::string(fragment) + "</w>";
  try {
    const XmlNode w = parse_xml(wrapped);
    return w.children.size() == 1 && trim(w.text).empty();
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace oai::detail
