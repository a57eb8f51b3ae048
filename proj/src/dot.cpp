#include "protolearn/dot.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "protolearn/errors.hpp"

namespace protolearn {

namespace {

enum class Tok { Id, LBrace, RBrace, LBracket, RBracket, Equals, Semi, Comma, Arrow, UndirectedEdge, Colon, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
};

bool is_id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
           static_cast<unsigned char>(c) >= 0x80;
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t i = 0;
    auto at_line_start = [&](std::size_t pos) {
        while (pos > 0 && (src[pos - 1] == ' ' || src[pos - 1] == '\t')) {
            --pos;
        }
        return pos == 0 || src[pos - 1] == '\n';
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') {
                ++i;
            }
        } else if (c == '#' && at_line_start(i)) {
            while (i < src.size() && src[i] != '\n') {
                ++i;
            }
        } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            const std::size_t start_line = line;
            i += 2;
            while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
                line += src[i] == '\n';
                ++i;
            }
            if (i + 1 >= src.size()) {
                throw ParseError(start_line, "unterminated comment");
            }
            i += 2;
        } else if (c == '"') {
            const std::size_t start_line = line;
            std::string text;
            ++i;
            while (i < src.size() && src[i] != '"') {
                if (src[i] == '\\' && i + 1 < src.size()) {
                    if (src[i + 1] == '"' || src[i + 1] == '\\') {
                        text += src[i + 1];
                        i += 2;
                        continue;
                    }
                    if (src[i + 1] == '\n') {
                        ++line;
                        i += 2;
                        continue;
                    }
                }
                line += src[i] == '\n';
                text += src[i++];
            }
            if (i >= src.size()) {
                throw ParseError(start_line, "unterminated string");
            }
            ++i;
            out.push_back({Tok::Id, std::move(text), start_line});
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", line});
            i += 2;
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            out.push_back({Tok::UndirectedEdge, "--", line});
            i += 2;
        } else if (is_id_char(c) || c == '-') {
            std::size_t j = i + 1;
            while (j < src.size() && is_id_char(src[j])) {
                ++j;
            }
            out.push_back({Tok::Id, std::string(src.substr(i, j - i)), line});
            i = j;
        } else {
            Tok kind;
            switch (c) {
                case '{': kind = Tok::LBrace; break;
                case '}': kind = Tok::RBrace; break;
                case '[': kind = Tok::LBracket; break;
                case ']': kind = Tok::RBracket; break;
                case '=': kind = Tok::Equals; break;
                case ';': kind = Tok::Semi; break;
                case ',': kind = Tok::Comma; break;
                case ':': kind = Tok::Colon; break;
                default: throw ParseError(line, std::string("unexpected character '") + c + "'");
            }
            out.push_back({kind, std::string(1, c), line});
            ++i;
        }
    }
    out.push_back({Tok::End, "", line});
    return out;
}

bool is_start_node(const std::string& name) { return name.rfind("__start", 0) == 0; }

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    PartialMealy parse() {
        if (peek().kind == Tok::Id && peek().text == "strict") {
            next();
        }
        const Token& head = expect(Tok::Id, "'digraph'");
        if (head.text == "graph") {
            throw ParseError(head.line, "undirected graphs cannot describe a Mealy machine");
        }
        if (head.text != "digraph") {
            throw ParseError(head.line, "expected 'digraph', got '" + head.text + "'");
        }
        if (peek().kind == Tok::Id) {
            next();
        }
        expect(Tok::LBrace, "'{'");
        while (peek().kind != Tok::RBrace) {
            if (peek().kind == Tok::End) {
                throw ParseError(peek().line, "missing closing '}'");
            }
            statement();
        }
        next();
        if (peek().kind != Tok::End) {
            throw ParseError(peek().line, "trailing content after graph");
        }
        return finish();
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    const Token& expect(Tok kind, const char* what) {
        if (peek().kind != kind) {
            throw ParseError(peek().line, std::string("expected ") + what + ", got '" + peek().text + "'");
        }
        return next();
    }

    std::map<std::string, std::string> attributes() {
        std::map<std::string, std::string> attrs;
        while (peek().kind == Tok::LBracket) {
            next();
            while (peek().kind != Tok::RBracket) {
                const Token& key = expect(Tok::Id, "attribute name");
                std::string value;
                if (peek().kind == Tok::Equals) {
                    next();
                    value = expect(Tok::Id, "attribute value").text;
                }
                attrs[key.text] = value;
                if (peek().kind == Tok::Comma || peek().kind == Tok::Semi) {
                    next();
                }
            }
            next();
        }
        return attrs;
    }

    std::string node_id() {
        const Token& t = expect(Tok::Id, "node id");
        if (peek().kind == Tok::Colon) {
            throw ParseError(peek().line, "node ports are not supported");
        }
        return t.text;
    }

    void note_node(const std::string& name) {
        if (!is_start_node(name)) {
            builder_.state(name);
        }
    }

    void statement() {
        const Token& first = peek();
        if (first.kind == Tok::Semi) {
            next();
            return;
        }
        if (first.kind != Tok::Id) {
            throw ParseError(first.line, "unexpected '" + first.text + "'");
        }
        if (first.text == "subgraph") {
            throw ParseError(first.line, "subgraphs are not supported");
        }
        if (first.text == "graph" || first.text == "node" || first.text == "edge") {
            next();
            attributes();
            return;
        }
        if (toks_[pos_ + 1].kind == Tok::Equals) {
            next();
            next();
            expect(Tok::Id, "value");
            return;
        }
        std::vector<std::string> chain{node_id()};
        const std::size_t line = first.line;
        while (peek().kind == Tok::Arrow || peek().kind == Tok::UndirectedEdge) {
            if (peek().kind == Tok::UndirectedEdge) {
                throw ParseError(peek().line, "undirected edge '--' in digraph");
            }
            next();
            chain.push_back(node_id());
        }
        auto attrs = attributes();
        for (const auto& n : chain) {
            note_node(n);
        }
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            edge(chain[k], chain[k + 1], attrs, line);
        }
    }

    void edge(const std::string& from, const std::string& to, const std::map<std::string, std::string>& attrs,
              std::size_t line) {
        auto label = attrs.find("label");
        if (is_start_node(from)) {
            if (label != attrs.end() && !label->second.empty()) {
                throw ParseError(line, "start edge must be unlabeled");
            }
            if (is_start_node(to)) {
                throw ParseError(line, "start edge must target a state");
            }
            if (initial_) {
                throw ParseError(line, "more than one start edge");
            }
            initial_ = to;
            return;
        }
        if (is_start_node(to)) {
            throw ParseError(line, "edge into the start marker");
        }
        if (label == attrs.end() || label->second.empty()) {
            throw ParseError(line, "edge " + from + " -> " + to + " has no input/output label");
        }
        const auto slash = label->second.find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 == label->second.size()) {
            throw ParseError(line, "label '" + label->second + "' is not of the form input/output");
        }
        auto trim = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
                s.pop_back();
            }
            std::size_t b = 0;
            while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) {
                ++b;
            }
            return s.substr(b);
        };
        const Symbol in = Symbol::of(trim(label->second.substr(0, slash)));
        const Symbol out = Symbol::of(trim(label->second.substr(slash + 1)));
        try {
            builder_.add_transition(builder_.state(from), in, out, builder_.state(to));
        } catch (const NonDeterminismError& e) {
            throw NonDeterminismError("line " + std::to_string(line) + ": " + e.what());
        }
    }

    PartialMealy finish() {
        if (!initial_) {
            throw ParseError(peek().line, "missing initial-state marker (__start0 -> state)");
        }
        builder_.set_initial(builder_.state(*initial_));
        return builder_.build_partial();
    }

    std::vector<Token> toks_;
    std::size_t pos_{0};
    MealyBuilder builder_;
    std::optional<std::string> initial_;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

PartialMealy parse_dot_partial(std::string_view text) { return Parser(tokenize(text)).parse(); }

MealyMachine parse_dot(std::string_view text) {
    PartialMealy p = parse_dot_partial(text);
    for (StateId q = 0; q < p.num_states(); ++q) {
        for (std::size_t k = 0; k < p.num_inputs(); ++k) {
            if (!p.defined(q, k)) {
                throw InvalidArgument("machine is not input-enabled: state '" + p.state_name(q) +
                                      "' has no transition for input '" + p.inputs()[k].name() + "'");
            }
        }
    }
    return p.sink_completed();
}

std::string serialize_dot(const MealyTable& m, std::string_view graph_name) {
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n";
    for (StateId q = 0; q < m.num_states(); ++q) {
        os << "    " << quote(m.state_name(q)) << " [label=" << quote(m.state_name(q)) << "];\n";
    }
    for (StateId q = 0; q < m.num_states(); ++q) {
        for (std::size_t k = 0; k < m.num_inputs(); ++k) {
            if (!m.defined(q, k)) {
                continue;
            }
            os << "    " << quote(m.state_name(q)) << " -> " << quote(m.state_name(m.next(q, k)))
               << " [label=" << quote(m.inputs()[k].name() + "/" + m.output(q, k).name()) << "];\n";
        }
    }
    os << "    __start0 [label=\"\" shape=\"none\"];\n";
    os << "    __start0 -> " << quote(m.state_name(m.initial())) << ";\n";
    os << "}\n";
    return os.str();
}

MealyMachine load_dot(const std::string& path) { return parse_dot(read_file(path)); }

PartialMealy load_dot_partial(const std::string& path) { return parse_dot_partial(read_file(path)); }

void save_dot(const MealyTable& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument("cannot write '" + path + "'");
    }
    out << serialize_dot(m);
}

}  // namespace protolearn
