// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <catmig/error.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace catmig::dsl {

enum class Tok { Ident, String, LBrace, RBrace, LParen, RParen, Comma, Semi, Colon, Dot, Equals, Arrow, End };

inline const char * describe(Tok t)
{
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Equals: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token
{
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

inline bool is_ident_char(char c)
{
    return (c >= 'A' and c <= 'Z') or (c >= 'a' and c <= 'z') or (c >= '0' and c <= '9') or c == '_' or c == '$' or
           c == '-';
}

/// Names that print without quotes: nonempty identifier characters and no `->` inside.
inline bool is_bare_identifier(std::string_view s)
{
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (not is_ident_char(s[i])) return false;
        if (s[i] == '-' and i + 1 < s.size() and s[i + 1] == '>') return false;
    }
    return true;
}

inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&] {
        if (text[i] == '\n') ++line, col = 1;
        else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++col;
        ++i;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' or c == '\t' or c == '\r' or c == '\n') { advance(); continue; }
        if (c == '#') {
            while (i < text.size() and text[i] != '\n') advance();
            continue;
        }
        std::size_t l = line, cl = col;
        if (c == '-' and i + 1 < text.size() and text[i + 1] == '>') {
            advance();
            advance();
            out.push_back({Tok::Arrow, "->", l, cl});
            continue;
        }
        if (is_ident_char(c)) {
            std::string id;
            while (i < text.size() and is_ident_char(text[i])) {
                if (text[i] == '-' and i + 1 < text.size() and text[i + 1] == '>') break;
                id += text[i];
                advance();
            }
            out.push_back({Tok::Ident, std::move(id), l, cl});
            continue;
        }
        if (c == '"') {
            advance();
            std::string s;
            for (;;) {
                if (i >= text.size() or text[i] == '\n') throw ParseError(l, cl, "unterminated string");
                if (text[i] == '"') { advance(); break; }
                if (text[i] == '\\') {
                    advance();
                    if (i >= text.size() or (text[i] != '"' and text[i] != '\\'))
                        throw ParseError(line, col, "unknown escape in string", {"'\\\"'", "'\\\\'"});
                }
                s += text[i];
                advance();
            }
            out.push_back({Tok::String, std::move(s), l, cl});
            continue;
        }
        Tok k;
        switch (c) {
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case ':': k = Tok::Colon; break;
        case '.': k = Tok::Dot; break;
        case '=': k = Tok::Equals; break;
        default: throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
        }
        advance();
        out.push_back({k, std::string(1, c), l, cl});
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

inline std::string quote_if_needed(std::string_view s)
{
    if (is_bare_identifier(s)) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' or c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}
