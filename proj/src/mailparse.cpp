#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "sseatk/common.hpp"
#include "sseatk/corpus.hpp"

namespace sseatk {
namespace {

namespace fs = std::filesystem;

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string strip(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool read_file(const fs::path& p, std::string& out) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return static_cast<bool>(in) || in.eof();
}

// Splits an RFC822-style message at the first blank line. Returns false when
// no header/body separator exists.
bool split_headers(std::string_view message, std::string_view& headers,
                   std::string_view& body) {
    std::size_t pos = 0;
    while (pos < message.size()) {
        std::size_t eol = message.find('\n', pos);
        if (eol == std::string_view::npos) return false;
        std::size_t len = eol - pos;
        if (len > 0 && message[pos + len - 1] == '\r') --len;
        if (len == 0) {
            headers = message.substr(0, pos);
            body = message.substr(eol + 1);
            return true;
        }
        pos = eol + 1;
    }
    return false;
}

// Header map with continuation-line folding; keys lowercased.
std::map<std::string, std::string> parse_headers(std::string_view block) {
    std::map<std::string, std::string> out;
    std::string current_key;
    std::size_t pos = 0;
    while (pos < block.size()) {
        std::size_t eol = block.find('\n', pos);
        if (eol == std::string_view::npos) eol = block.size();
        std::string_view line = block.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && (line[0] == ' ' || line[0] == '\t')) {
            if (!current_key.empty()) out[current_key] += ' ' + strip(line);
        } else {
            auto colon = line.find(':');
            if (colon != std::string_view::npos) {
                current_key = lower(std::string(line.substr(0, colon)));
                std::string value = strip(line.substr(colon + 1));
                auto [it, inserted] = out.emplace(current_key, value);
                if (!inserted) it->second = value;
            } else {
                current_key.clear();
            }
        }
        pos = eol + 1;
    }
    return out;
}

std::string header_param(const std::string& header_value, const std::string& param) {
    std::string low = lower(header_value);
    std::string needle = param + "=";
    auto pos = low.find(needle);
    if (pos == std::string::npos) return {};
    pos += needle.size();
    if (pos < header_value.size() && header_value[pos] == '"') {
        auto end = header_value.find('"', pos + 1);
        if (end == std::string::npos) return {};
        return header_value.substr(pos + 1, end - pos - 1);
    }
    auto end = header_value.find_first_of("; \t\r\n", pos);
    return header_value.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

std::string decode_quoted_printable(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] != '=') {
            out.push_back(in[i]);
            continue;
        }
        if (i + 1 < in.size() && in[i + 1] == '\n') {
            ++i;  // soft break
        } else if (i + 2 < in.size() && in[i + 1] == '\r' && in[i + 2] == '\n') {
            i += 2;
        } else if (i + 2 < in.size()) {
            int hi = hex(in[i + 1]), lo = hex(in[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
            } else {
                out.push_back('=');
            }
        } else {
            out.push_back('=');
        }
    }
    return out;
}

std::string decode_base64(std::string_view in) {
    static constexpr signed char table[] = {
        // clang-format off
        -1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,
        -1,-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,62,-1,-1,-1,63,52,53,54,55,56,57,58,59,60,61,-1,-1,-1,-1,-1,-1,
        -1, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9,10,11,12,13,14,15,16,17,18,19,20,21,22,23,24,25,-1,-1,-1,-1,-1,
        -1,26,27,28,29,30,31,32,33,34,35,36,37,38,39,40,41,42,43,44,45,46,47,48,49,50,51,-1,-1,-1,-1,-1,
        // clang-format on
    };
    std::string out;
    out.reserve(in.size() * 3 / 4);
    unsigned acc = 0;
    int bits = 0;
    for (unsigned char c : in) {
        if (c == '=' ) break;
        if (c >= 128) continue;
        signed char v = table[c];
        if (v < 0) continue;
        acc = (acc << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<char>((acc >> bits) & 0xff));
        }
    }
    return out;
}

// Collects the decoded text/* content of a message, recursing into multipart
// bodies. Non-text attachments are dropped.
void collect_text(const std::map<std::string, std::string>& headers, std::string_view body,
                  std::string& out, int depth = 0) {
    if (depth > 8) return;
    std::string ctype;
    if (auto it = headers.find("content-type"); it != headers.end()) ctype = lower(it->second);

    if (ctype.rfind("multipart/", 0) == 0) {
        auto it = headers.find("content-type");
        std::string boundary = header_param(it->second, "boundary");
        if (boundary.empty()) return;
        std::string delim = "--" + boundary;
        std::vector<std::string_view> parts;
        std::size_t pos = 0;
        std::size_t start = std::string_view::npos;
        while (pos <= body.size()) {
            std::size_t eol = body.find('\n', pos);
            std::size_t end = eol == std::string_view::npos ? body.size() : eol;
            std::string_view line = body.substr(pos, end - pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (line.rfind(delim, 0) == 0) {
                if (start != std::string_view::npos && pos > start)
                    parts.push_back(body.substr(start, pos - start));
                if (line.size() >= delim.size() + 2 &&
                    line.compare(delim.size(), 2, "--") == 0)
                    break;  // closing delimiter
                start = end + 1;
            }
            if (eol == std::string_view::npos) break;
            pos = eol + 1;
        }
        for (auto part : parts) {
            std::string_view ph, pb;
            if (split_headers(part, ph, pb)) {
                collect_text(parse_headers(ph), pb, out, depth + 1);
            } else {
                out.append(part);
                out.push_back('\n');
            }
        }
        return;
    }

    if (!ctype.empty() && ctype.rfind("text/", 0) != 0) return;

    std::string cte;
    if (auto it = headers.find("content-transfer-encoding"); it != headers.end())
        cte = lower(strip(it->second));
    if (cte == "quoted-printable") {
        out += decode_quoted_printable(body);
    } else if (cte == "base64") {
        out += decode_base64(body);
    } else {
        out.append(body);
    }
    out.push_back('\n');
}

// The java-user list footer starts with a "To unsubscribe, e-mail: ..." line;
// everything from that line on is dropped.
std::string strip_list_signature(std::string_view body) {
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t eol = body.find('\n', pos);
        std::size_t end = eol == std::string_view::npos ? body.size() : eol;
        std::string line = strip(body.substr(pos, end - pos));
        if (lower(line).rfind("to unsubscribe", 0) == 0)
            return std::string(body.substr(0, pos));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return std::string(body);
}

}  // namespace

std::vector<RawDocument> parse_enron(const fs::path& maildir_root, ParseStats* stats) {
    if (!fs::is_directory(maildir_root))
        fail("Enron maildir root is not a readable directory: ", maildir_root.string());

    ParseStats local;
    std::vector<RawDocument> docs;
    for (auto it = fs::recursive_directory_iterator(
             maildir_root, fs::directory_options::skip_permission_denied);
         it != fs::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        const fs::path rel = fs::relative(it->path(), maildir_root);
        bool in_sent_mail = false;
        for (const auto& part : rel.parent_path())
            if (part == "_sent_mail") in_sent_mail = true;
        if (!in_sent_mail) continue;

        std::string content;
        std::string_view headers, body;
        if (!read_file(it->path(), content) || !split_headers(content, headers, body)) {
            ++local.skipped;
            continue;
        }
        docs.push_back({rel.generic_string(), std::string(body)});
        ++local.parsed;
    }
    std::sort(docs.begin(), docs.end(),
              [](const RawDocument& a, const RawDocument& b) { return a.doc_id < b.doc_id; });
    if (stats) *stats = local;
    return docs;
}

std::vector<RawDocument> parse_apache(const std::vector<fs::path>& mbox_files,
                                      ParseStats* stats) {
    ParseStats local;
    std::vector<RawDocument> docs;
    for (const auto& file : mbox_files) {
        std::string content;
        if (!read_file(file, content)) fail("cannot read mbox file: ", file.string());

        // Message boundaries: "From " at the start of a line.
        std::vector<std::size_t> starts;
        if (content.rfind("From ", 0) == 0) starts.push_back(0);
        std::size_t pos = 0;
        while ((pos = content.find("\nFrom ", pos)) != std::string::npos) {
            starts.push_back(pos + 1);
            ++pos;
        }

        std::size_t index = 0;
        for (std::size_t s = 0; s < starts.size(); ++s) {
            std::size_t begin = starts[s];
            std::size_t end = s + 1 < starts.size() ? starts[s + 1] : content.size();
            std::string_view message(content.data() + begin, end - begin);
            // Drop the "From " envelope line.
            auto eol = message.find('\n');
            if (eol == std::string_view::npos) {
                ++local.skipped;
                continue;
            }
            message.remove_prefix(eol + 1);
            std::string_view headers, body;
            if (!split_headers(message, headers, body)) {
                ++local.skipped;
                continue;
            }
            std::string text;
            collect_text(parse_headers(headers), body, text);
            docs.push_back({file.stem().string() + "#" + std::to_string(index++),
                            strip_list_signature(text)});
            ++local.parsed;
        }
    }
    if (stats) *stats = local;
    return docs;
}

}  // namespace sseatk
