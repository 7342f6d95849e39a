#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../item.hpp"

namespace ifq::bench {

/// Token trace: one item per line, or one CSV field per line.
/// `csv_column` is 1-based; 0 means "the whole line is the token".
struct TraceSource {
    std::string path;  // "-" reads standard input
    uint32_t csv_column = 0;
    char delimiter = ',';
};

struct TraceData {
    std::vector<ItemId> items;
    uint64_t skipped = 0;  // malformed lines: tallied, never silently dropped
    StringInterner interner;
};

inline TraceData parse_trace(const TraceSource& src) {
    std::ifstream file;
    std::istream* in = nullptr;
    if (src.path == "-") {
        in = &std::cin;
    } else {
        file.open(src.path);
        if (!file) raise(Errc::trace_unreadable, "cannot open " + src.path);
        in = &file;
    }

    TraceData out;
    std::string line;
    while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string token;
        if (src.csv_column == 0) {
            token = line;
        } else {
            size_t start = 0;
            uint32_t col = 1;
            bool found = false;
            while (true) {
                size_t end = line.find(src.delimiter, start);
                if (col == src.csv_column) {
                    token = line.substr(start, end == std::string::npos ? std::string::npos
                                                                        : end - start);
                    found = true;
                    break;
                }
                if (end == std::string::npos) break;
                start = end + 1;
                ++col;
            }
            if (!found) {
                ++out.skipped;
                continue;
            }
        }
        if (token.empty()) {
            ++out.skipped;
            continue;
        }
        out.items.push_back(out.interner.intern(token));
    }
    return out;
}

}  // namespace ifq::bench
