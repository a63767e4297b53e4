#pragma once

// Minimal pull parser for the XML subset used by XES files: elements,
// attributes, comments, processing instructions, DOCTYPE, CDATA and the
// predefined/numeric character entities. Text content is skipped.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucx::detail {

struct XmlNode {
    enum class Kind { start, end, eof };

    Kind kind = Kind::eof;
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    bool self_closing = false;
    std::size_t line = 0;

    const std::string* attribute(std::string_view key) const;
};

class XmlReader {
  public:
    explicit XmlReader(std::string document);

    /// Next start/end tag. A self-closing tag is reported once as `start`
    /// with self_closing set; no matching `end` follows.
    XmlNode next();
    std::size_t depth() const noexcept { return stack_.size(); }

  private:
    void skip_until(std::string_view terminator);
    void advance(std::size_t n);
    [[noreturn]] void fail(const std::string& what) const;
    std::string read_name();
    std::string decode(std::string_view raw) const;

    std::string doc_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    bool seen_root_ = false;
    std::vector<std::string> stack_;
};

}  // namespace ucx::detail
