#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "twdist/error.hpp"
#include "twdist/json_io.hpp"
#include "twdist/phylo.hpp"

namespace twdist {

namespace detail {

class NewickReader {
public:
    explicit NewickReader(std::string_view text) : s_(text) {}

    PhyloTree read() {
        skip();
        if (at_end()) throw Error("empty Newick input");
        VertexId root = node(true);
        skip();
        if (at_end() || s_[i_] != ';') {
            if (!at_end() && s_[i_] == ')') throw Error("unbalanced parentheses");
            throw Error("expected ';' at position " + std::to_string(i_));
        }
        ++i_;
        skip();
        if (!at_end()) throw Error("trailing text after ';'");
        std::size_t d = g_.degree(root);
        if (!g_.is_labelled(root)) {
            if (d == 2)
                g_.suppress(root);
            else if (d != 3)
                throw Error("not unrooted binary: root has " + std::to_string(d) + " children");
        }
        return PhyloTree(std::move(g_));
    }

private:
    bool at_end() const { return i_ >= s_.size(); }

    void skip() {
        for (;;) {
            while (!at_end() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) ++i_;
            if (!at_end() && s_[i_] == '[') {
                auto close = s_.find(']', i_);
                if (close == std::string_view::npos) throw Error("unterminated comment");
                i_ = close + 1;
                continue;
            }
            return;
        }
    }

    std::string label() {
        skip();
        if (at_end()) return {};
        if (s_[i_] == '\'') {
            std::string out;
            ++i_;
            for (;;) {
                if (at_end()) throw Error("unterminated quoted label");
                if (s_[i_] == '\'') {
                    if (i_ + 1 < s_.size() && s_[i_ + 1] == '\'') {
                        out += '\'';
                        i_ += 2;
                        continue;
                    }
                    ++i_;
                    break;
                }
                out += s_[i_++];
            }
            if (out.empty()) throw Error("empty quoted label");
            return out;
        }
        std::size_t start = i_;
        while (!at_end() && plain_label_char(s_[i_])) ++i_;
        return std::string(s_.substr(start, i_ - start));
    }

    void branch_length() {
        skip();
        if (at_end() || s_[i_] != ':') return;
        ++i_;
        skip();
        std::size_t start = i_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' || s_[i_] == 'e' || s_[i_] == 'E' ||
                             s_[i_] == '-' || s_[i_] == '+'))
            ++i_;
        std::string num(s_.substr(start, i_ - start));
        char* end = nullptr;
        std::strtod(num.c_str(), &end);
        if (num.empty() || end != num.c_str() + num.size()) throw Error("malformed branch length at position " + std::to_string(start));
    }

    VertexId node(bool is_root) {
        skip();
        if (at_end()) throw Error("unbalanced parentheses");
        if (s_[i_] == '(') {
            ++i_;
            VertexId v = g_.add_vertex();
            std::size_t children = 0;
            for (;;) {
                VertexId c = node(false);
                g_.add_edge(v, c);
                ++children;
                skip();
                if (at_end()) throw Error("unbalanced parentheses");
                if (s_[i_] == ',') {
                    ++i_;
                    continue;
                }
                if (s_[i_] == ')') {
                    ++i_;
                    break;
                }
                throw Error("unexpected character '" + std::string(1, s_[i_]) + "' at position " + std::to_string(i_));
            }
            label();  // internal labels are ignored
            branch_length();
            if (!is_root && children != 2) throw Error("not unrooted binary: internal vertex with " + std::to_string(children) + " children");
            return v;
        }
        std::string l = label();
        if (l.empty()) {
            if (s_[i_] == ')' || s_[i_] == ',' || s_[i_] == ';' || s_[i_] == ':') throw Error("empty leaf label at position " + std::to_string(i_));
            throw Error("unexpected character '" + std::string(1, s_[i_]) + "' at position " + std::to_string(i_));
        }
        if (g_.find(l)) throw Error("duplicate leaf label '" + l + "'");
        VertexId v = g_.add_vertex(l);
        branch_length();
        return v;
    }

    std::string_view s_;
    std::size_t i_ = 0;
    UGraph g_;
};

}  // namespace detail

inline PhyloTree parse_tree(std::string_view text) { return detail::NewickReader(text).read(); }

// Splits a document into statements (each ending in ';'), skipping quotes
// and comments, and parses each.
inline std::vector<PhyloTree> parse_trees(std::string_view text) {
    std::vector<PhyloTree> out;
    std::size_t start = 0;
    bool quoted = false, comment = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (comment) {
            comment = c != ']';
        } else if (quoted) {
            quoted = c != '\'';
        } else if (c == '\'') {
            quoted = true;
        } else if (c == '[') {
            comment = true;
        } else if (c == ';') {
            out.push_back(parse_tree(text.substr(start, i + 1 - start)));
            start = i + 1;
        }
    }
    for (std::size_t i = start; i < text.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i]))) throw Error("expected ';' at end of input");
    return out;
}

namespace detail {

inline std::string write_subtree(const UGraph& g, VertexId v, VertexId from, std::string& min_out) {
    if (g.is_labelled(v)) {
        min_out = *g.label(v);
        return quote_label(*g.label(v));
    }
    std::vector<std::pair<std::string, std::string>> kids;
    for (VertexId w : g.neighbors(v)) {
        if (w == from) continue;
        std::string m;
        std::string s = write_subtree(g, w, v, m);
        kids.push_back({m, s});
    }
    std::sort(kids.begin(), kids.end());
    min_out = kids.front().first;
    std::string out = "(";
    for (std::size_t i = 0; i < kids.size(); ++i) out += (i ? "," : "") + kids[i].second;
    return out + ")";
}

}  // namespace detail

// Trifurcating-root Newick. Designated roots are suppressed.
inline std::string write_tree(const PhyloTree& t0) {
    PhyloTree t = strip_roots(t0);
    const UGraph& g = t.graph();
    if (t.size() == 1) return quote_label(t.taxa().front()) + ";";
    if (t.size() == 2) return "(" + quote_label(t.taxa()[0]) + "," + quote_label(t.taxa()[1]) + ");";
    VertexId root = t.parent(t.taxa().front());
    std::string m;
    return detail::write_subtree(g, root, root, m) + ";";
}

inline PhyloNetwork parse_network(const std::string& json_text) { return PhyloNetwork(parse_graph(json_text)); }

inline std::string write_network(const PhyloNetwork& n) { return write_graph(n.graph()); }

}  // namespace twdist
