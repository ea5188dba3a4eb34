#pragma once

#include <banet/error.hpp>
#include <banet/formula.hpp>
#include <banet/network.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace banet {

// Network files hold one `name = expression` definition per line. `#` starts
// a comment that runs to the end of the line; blank lines are ignored.
// Automaton indices follow the order of definition and expressions may refer
// to automata defined further down.

namespace detail {

struct Definition
{
    std::string name;
    std::string_view expr;
    SourcePos expr_pos;
};

inline std::size_t skip_blanks(std::string_view s, std::size_t from)
{
    while (from < s.size() && (s[from] == ' ' || s[from] == '\t' || s[from] == '\r'))
        ++from;
    return from;
}

} // namespace detail

inline Ban parse_network(std::string_view text)
{
    std::vector<detail::Definition> defs;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        auto pos = detail::skip_blanks(line, 0);
        if (pos < line.size()) {
            auto name_start = pos;
            while (pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[pos])) || line[pos] == '_'))
                ++pos;
            auto name = line.substr(name_start, pos - name_start);
            if (!is_identifier(name))
                throw parse_error("expected automaton name", line_no, name_start + 1);
            pos = detail::skip_blanks(line, pos);
            if (pos >= line.size() || line[pos] != '=')
                throw parse_error("expected '='", line_no, pos + 1);
            ++pos;
            for (const auto& d : defs)
                if (d.name == name)
                    throw validation_error(std::to_string(line_no) + ":" + std::to_string(name_start + 1) +
                                           ": automaton '" + std::string(name) + "' is defined twice");
            defs.push_back({std::string(name), line.substr(pos), SourcePos{line_no, pos + 1}});
        }
        if (end == text.size())
            break;
        start = end + 1;
    }
    if (defs.empty())
        throw validation_error("network file defines no automata");

    std::vector<std::string> names;
    for (const auto& d : defs)
        names.push_back(d.name);
    auto resolve = [&](std::string_view id, SourcePos where) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == id)
                return i;
        throw validation_error(std::to_string(where.line) + ":" + std::to_string(where.column) +
                               ": undefined automaton '" + std::string(id) + "'");
    };
    std::vector<Formula> functions;
    for (const auto& d : defs)
        functions.push_back(parse(d.expr, resolve, d.expr_pos));
    return Ban(std::move(names), std::move(functions));
}

inline Ban load_network(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

inline std::string write_network(const Ban& b)
{
    std::string out;
    for (std::size_t i = 0; i < b.size(); ++i)
        out += b.name(i) + " = " + b.print_function(i) + "\n";
    return out;
}

} // namespace banet
