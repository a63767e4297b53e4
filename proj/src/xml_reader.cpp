#include "xml_reader.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>

#include "ucx/errors.hpp"

namespace ucx::detail {

namespace {

bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == ':' || c == '-' || c == '.' || u >= 0x80;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

const std::string* XmlNode::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return &v;
    }
    return nullptr;
}

XmlReader::XmlReader(std::string document) : doc_(std::move(document)) {
    // UTF-8 byte order mark
    if (doc_.size() >= 3 && doc_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;
}

void XmlReader::fail(const std::string& what) const { throw ParseError("malformed XML: " + what, line_); }

void XmlReader::advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < doc_.size(); ++i, ++pos_) {
        if (doc_[pos_] == '\n') ++line_;
    }
}

void XmlReader::skip_until(std::string_view terminator) {
    auto found = doc_.find(terminator, pos_);
    if (found == std::string::npos) fail("unterminated construct, expected '" + std::string(terminator) + "'");
    advance(found + terminator.size() - pos_);
}

std::string XmlReader::read_name() {
    std::size_t start = pos_;
    while (pos_ < doc_.size() && is_name_char(doc_[pos_])) ++pos_;
    if (start == pos_) fail("expected a name");
    return doc_.substr(start, pos_ - start);
}

std::string XmlReader::decode(std::string_view raw) const {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out.push_back(raw[i]);
            continue;
        }
        auto semi = raw.find(';', i);
        if (semi == std::string_view::npos) fail("unterminated entity");
        auto entity = raw.substr(i + 1, semi - i - 1);
        if (entity == "amp") {
            out.push_back('&');
        } else if (entity == "lt") {
            out.push_back('<');
        } else if (entity == "gt") {
            out.push_back('>');
        } else if (entity == "quot") {
            out.push_back('"');
        } else if (entity == "apos") {
            out.push_back('\'');
        } else if (!entity.empty() && entity[0] == '#') {
            std::uint32_t cp = 0;
            int base = 10;
            auto digits = entity.substr(1);
            if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
                base = 16;
                digits.remove_prefix(1);
            }
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, base);
            if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
                fail("bad character reference &" + std::string(entity) + ";");
            append_utf8(out, cp);
        } else {
            fail("unknown entity &" + std::string(entity) + ";");
        }
        i = semi;
    }
    return out;
}

XmlNode XmlReader::next() {
    while (true) {
        auto lt = doc_.find('<', pos_);
        if (lt == std::string::npos) {
            if (!stack_.empty()) fail("unexpected end of document inside <" + stack_.back() + ">");
            if (!seen_root_) fail("no root element");
            advance(doc_.size() - pos_);
            return XmlNode{XmlNode::Kind::eof, {}, {}, false, line_};
        }
        advance(lt - pos_);
        std::string_view rest(doc_.data() + pos_, doc_.size() - pos_);

        if (rest.starts_with("<!--")) {
            skip_until("-->");
            continue;
        }
        if (rest.starts_with("<![CDATA[")) {
            skip_until("]]>");
            continue;
        }
        if (rest.starts_with("<?")) {
            skip_until("?>");
            continue;
        }
        if (rest.starts_with("<!")) {
            skip_until(">");
            continue;
        }

        XmlNode node;
        node.line = line_;
        if (rest.starts_with("</")) {
            advance(2);
            node.kind = XmlNode::Kind::end;
            node.name = read_name();
            while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) advance(1);
            if (pos_ >= doc_.size() || doc_[pos_] != '>') fail("expected '>' after </" + node.name);
            advance(1);
            if (stack_.empty() || stack_.back() != node.name)
                fail("mismatched closing tag </" + node.name + ">" +
                     (stack_.empty() ? std::string() : ", expected </" + stack_.back() + ">"));
            stack_.pop_back();
            return node;
        }

        advance(1);
        node.kind = XmlNode::Kind::start;
        if (stack_.empty() && seen_root_) fail("content after the root element");
        node.name = read_name();
        while (true) {
            while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) advance(1);
            if (pos_ >= doc_.size()) fail("unterminated tag <" + node.name);
            char c = doc_[pos_];
            if (c == '>') {
                advance(1);
                break;
            }
            if (c == '/') {
                if (pos_ + 1 >= doc_.size() || doc_[pos_ + 1] != '>') fail("stray '/' in tag <" + node.name);
                advance(2);
                node.self_closing = true;
                break;
            }
            std::string key = read_name();
            while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) advance(1);
            if (pos_ >= doc_.size() || doc_[pos_] != '=') fail("attribute '" + key + "' without value");
            advance(1);
            while (pos_ < doc_.size() && std::isspace(static_cast<unsigned char>(doc_[pos_]))) advance(1);
            if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) fail("unquoted attribute '" + key + "'");
            char quote = doc_[pos_];
            auto close = doc_.find(quote, pos_ + 1);
            if (close == std::string::npos) fail("unterminated attribute value for '" + key + "'");
            auto raw = std::string_view(doc_).substr(pos_ + 1, close - pos_ - 1);
            if (raw.find('<') != std::string_view::npos) fail("'<' inside attribute value");
            node.attributes.emplace_back(std::move(key), decode(raw));
            advance(close + 1 - pos_);
        }
        seen_root_ = true;
        if (!node.self_closing) stack_.push_back(node.name);
        return node;
    }
}

}  // namespace ucx::detail
