/*
 * testlib.h -- compact testlib-compatible subset bundled with testforge.
 *
 * Implements the parts of the classic testlib API that generators,
 * validators and checkers in this repository use:
 *   generators : registerGen, rnd.next/any/perm, shuffle, opt/has_opt, format
 *   validators : registerValidation, inf.readInt/readLong/readToken/readWord/
 *                readChar/readSpace/readEoln/readEof/readLine, ensure(f)
 *   checkers   : registerTestlibCmd, inf/ouf/ans, quitf(_ok|_wa|_pe|_fail)
 *
 * The random stream is seeded only from argv, so a generator called twice
 * with the same arguments prints the same test. The sequence is NOT the one
 * produced by upstream testlib.
 *
 * Exit codes: 0 ok, 1 wrong answer, 2 presentation error, 3 failure
 * (validation failures also exit 3).
 */
#ifndef TESTFORGE_TESTLIB_H
#define TESTFORGE_TESTLIB_H

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

enum TResult { _ok = 0, _wa = 1, _pe = 2, _fail = 3 };

inline std::string format(const char *fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    va_list ap2;
    va_copy(ap2, ap);
    int n = vsnprintf(nullptr, 0, fmt, ap);
    va_end(ap);
    std::string s(n > 0 ? n : 0, '\0');
    if (n > 0) vsnprintf(&s[0], (size_t)n + 1, fmt, ap2);
    va_end(ap2);
    return s;
}

[[noreturn]] inline void quit(TResult result, const std::string &msg) {
    static const char *names[] = {"ok", "wrong answer", "wrong output format", "FAIL"};
    std::fprintf(result == _ok ? stdout : stderr, "%s %s\n", names[result], msg.c_str());
    std::fflush(stdout);
    std::exit((int)result);
}

[[noreturn]] inline void quitf(TResult result, const char *fmt, ...) {
    va_list ap;
    va_start(ap, fmt);
    char buf[4096];
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    quit(result, buf);
}

#define ensuref(cond, ...)                                   \
    do {                                                     \
        if (!(cond)) quit(_fail, format(__VA_ARGS__));       \
    } while (0)
#define ensure(cond) ensuref(cond, "%s", "ensure failed: " #cond)

/* ------------------------------------------------------------------ random */

class random_t {
    uint64_t s[4] = {0x9E3779B97F4A7C15ULL, 0xBF58476D1CE4E5B9ULL, 0x94D049BB133111EBULL, 42};

    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    static uint64_t splitmix(uint64_t &x) {
        uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

public:
    void setSeed(uint64_t seed) {
        for (auto &w : s) w = splitmix(seed);
    }

    uint64_t nextBits() {
        uint64_t r = rotl(s[1] * 5, 7) * 9, t = s[1] << 17;
        s[2] ^= s[0]; s[3] ^= s[1]; s[1] ^= s[2]; s[0] ^= s[3];
        s[2] ^= t; s[3] = rotl(s[3], 45);
        return r;
    }

    /* uniform in [0, n) without modulo bias */
    uint64_t nextU(uint64_t n) {
        if (n == 0) quit(_fail, "random_t::next: empty range");
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do { x = nextBits(); } while (x >= limit);
        return x % n;
    }

    int next(int n) { return (int)nextU((uint64_t)n); }
    long long next(long long n) { return (long long)nextU((uint64_t)n); }
    int next(int a, int b) { return (int)((long long)a + (long long)nextU((uint64_t)((long long)b - a + 1))); }
    long long next(long long a, long long b) {
        if (a > b) quit(_fail, "random_t::next: a > b");
        uint64_t span = (uint64_t)b - (uint64_t)a + 1;
        if (span == 0) return (long long)nextBits();
        return (long long)((uint64_t)a + nextU(span));
    }
    long long next(int a, long long b) { return next((long long)a, b); }
    long long next(long long a, int b) { return next(a, (long long)b); }
    double next() { return (double)(nextBits() >> 11) * (1.0 / 9007199254740992.0); }
    double next(double a, double b) { return a + (b - a) * next(); }

    /* weighted: max (or min for negative type) of |type|+1 uniform draws */
    int wnext(int n, int type) {
        int best = next(n);
        for (int i = 0; i < std::abs(type); i++) {
            int v = next(n);
            best = type > 0 ? std::max(best, v) : std::min(best, v);
        }
        return best;
    }
    int wnext(int a, int b, int type) { return a + wnext(b - a + 1, type); }

    template <typename C>
    auto any(const C &c) -> decltype(*std::begin(c)) {
        size_t n = (size_t)std::distance(std::begin(c), std::end(c));
        auto it = std::begin(c);
        std::advance(it, (long)nextU(n));
        return *it;
    }

    std::vector<int> perm(int n, int first = 0) {
        std::vector<int> p(n);
        for (int i = 0; i < n; i++) p[i] = first + i;
        for (int i = n - 1; i > 0; i--) std::swap(p[i], p[next(i + 1)]);
        return p;
    }
};

inline random_t rnd;

template <typename It>
void shuffle(It first, It last) {
    long n = (long)std::distance(first, last);
    for (long i = n - 1; i > 0; i--) std::iter_swap(first + i, first + (long)rnd.nextU((uint64_t)i + 1));
}

/* --------------------------------------------------------------- options */

inline std::vector<std::string> __testlib_argv;

inline void registerGen(int argc, char *argv[], int = 1) {
    __testlib_argv.assign(argv, argv + argc);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 1; i < argc; i++) {
        for (const char *p = argv[i]; *p; p++) h = (h ^ (unsigned char)*p) * 0x100000001b3ULL;
        h = (h ^ 0x1f) * 0x100000001b3ULL;
    }
    rnd.setSeed(h);
}

inline bool __testlib_find_opt(const std::string &key, std::string &value) {
    for (size_t i = 1; i < __testlib_argv.size(); i++) {
        std::string a = __testlib_argv[i];
        size_t dashes = 0;
        while (dashes < a.size() && dashes < 2 && a[dashes] == '-') dashes++;
        std::string body = a.substr(dashes);
        size_t eq = body.find('=');
        if (eq != std::string::npos) {
            if (body.substr(0, eq) == key) { value = body.substr(eq + 1); return true; }
        } else if (dashes > 0 && body == key) {
            if (i + 1 < __testlib_argv.size()) { value = __testlib_argv[i + 1]; return true; }
            value = "true";
            return true;
        }
    }
    return false;
}

inline bool has_opt(const std::string &key) {
    std::string v;
    return __testlib_find_opt(key, v);
}

template <typename T>
T __testlib_convert(const std::string &v) {
    if constexpr (std::is_same<T, std::string>::value) {
        return v;
    } else if constexpr (std::is_same<T, bool>::value) {
        return v == "true" || v == "1";
    } else if constexpr (std::is_floating_point<T>::value) {
        return (T)std::stod(v);
    } else {
        errno = 0;
        char *end = nullptr;
        long long x = std::strtoll(v.c_str(), &end, 10);
        if (errno || !end || *end) quit(_fail, "opt: cannot parse '" + v + "' as integer");
        return (T)x;
    }
}

template <typename T = std::string>
T opt(const std::string &key) {
    std::string v;
    if (!__testlib_find_opt(key, v)) quit(_fail, "opt: missing option '" + key + "'");
    return __testlib_convert<T>(v);
}

template <typename T = std::string>
T opt(const std::string &key, const T &fallback) {
    std::string v;
    return __testlib_find_opt(key, v) ? __testlib_convert<T>(v) : fallback;
}

template <typename T = std::string>
T opt(int index) {
    if (index <= 0 || (size_t)index >= __testlib_argv.size()) quit(_fail, format("opt: no argument #%d", index));
    return __testlib_convert<T>(__testlib_argv[index]);
}

/* ---------------------------------------------------------------- streams */

class InStream {
    std::string buf;
    size_t pos = 0;
    bool strict = false;
    TResult onError = _fail;
    std::string label;

    [[noreturn]] void fail(const std::string &msg) {
        quit(onError, label + ": " + msg + format(" (at byte %zu)", pos));
    }
    void skipBlanks() {
        if (strict) return;
        while (pos < buf.size() && std::isspace((unsigned char)buf[pos])) pos++;
    }
    static bool blank(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

public:
    InStream() = default;

    void init(std::istream &in, bool strictMode, TResult err, const std::string &name) {
        std::ostringstream ss;
        ss << in.rdbuf();
        buf = ss.str();
        pos = 0;
        strict = strictMode;
        onError = err;
        label = name;
    }
    void init(const char *path, bool strictMode, TResult err, const std::string &name) {
        FILE *f = std::fopen(path, "rb");
        if (!f) quit(_fail, std::string("cannot open ") + path);
        buf.clear();
        char chunk[65536];
        size_t n;
        while ((n = std::fread(chunk, 1, sizeof chunk, f)) > 0) buf.append(chunk, n);
        std::fclose(f);
        pos = 0;
        strict = strictMode;
        onError = err;
        label = name;
    }

    bool eof() { return pos >= buf.size(); }
    bool seekEof() {
        size_t p = pos;
        while (p < buf.size() && std::isspace((unsigned char)buf[p])) p++;
        return p >= buf.size();
    }

    std::string readToken() {
        skipBlanks();
        size_t start = pos;
        while (pos < buf.size() && !blank(buf[pos])) pos++;
        if (start == pos) fail("expected a token");
        return buf.substr(start, pos - start);
    }
    std::string readWord() { return readToken(); }
    std::string readToken(const std::string &, const std::string &name) { return readToken_named(name); }
    std::string readWord(const std::string &, const std::string &name) { return readToken_named(name); }
    std::string readToken_named(const std::string &name) {
        skipBlanks();
        size_t start = pos;
        while (pos < buf.size() && !blank(buf[pos])) pos++;
        if (start == pos) fail("expected token " + name);
        return buf.substr(start, pos - start);
    }

    long long readLong(long long lo = LLONG_MIN, long long hi = LLONG_MAX, const std::string &name = "") {
        std::string t = readToken();
        size_t i = (t[0] == '-') ? 1 : 0;
        if (i == t.size() || t.size() - i > 19) fail("expected an integer" + (name.empty() ? "" : " " + name) + ", got '" + t + "'");
        for (size_t j = i; j < t.size(); j++)
            if (!std::isdigit((unsigned char)t[j])) fail("expected an integer" + (name.empty() ? "" : " " + name) + ", got '" + t + "'");
        if (strict && ((t.size() - i > 1 && t[i] == '0') || t == "-0")) fail("non-canonical integer '" + t + "'");
        errno = 0;
        long long v = std::strtoll(t.c_str(), nullptr, 10);
        if (errno) fail("integer out of range: " + t);
        if (v < lo || v > hi)
            fail(format("%s=%lld violates the range [%lld, %lld]", name.empty() ? "integer" : name.c_str(), v, lo, hi));
        return v;
    }
    int readInt(int lo = INT_MIN, int hi = INT_MAX, const std::string &name = "") {
        return (int)readLong(lo, hi, name);
    }
    std::vector<int> readInts(int n, int lo, int hi, const std::string &name = "") {
        std::vector<int> v(n);
        for (int i = 0; i < n; i++) {
            v[i] = readInt(lo, hi, name);
            if (i + 1 < n) readSpace();
        }
        return v;
    }
    double readDouble(double lo = -INFINITY, double hi = INFINITY, const std::string &name = "") {
        std::string t = readToken();
        char *end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (!end || *end) fail("expected a real number, got '" + t + "'");
        if (v < lo || v > hi) fail(format("%s=%g violates the range [%g, %g]", name.c_str(), v, lo, hi));
        return v;
    }
    double readReal(double lo = -INFINITY, double hi = INFINITY, const std::string &name = "") {
        return readDouble(lo, hi, name);
    }

    char readChar() {
        if (pos >= buf.size()) fail("unexpected end of file");
        return buf[pos++];
    }
    char readChar(char c) {
        char got = readChar();
        if (got != c) fail(format("expected character code %d, got %d", (int)c, (int)got));
        return got;
    }
    void readSpace() {
        if (strict) readChar(' ');
    }
    void readEoln() {
        if (!strict) { skipBlanks(); return; }
        readChar('\n');
    }
    void readEof() {
        if (!strict) skipBlanks();
        if (pos != buf.size()) fail("expected end of file");
    }
    std::string readLine() {
        size_t start = pos;
        while (pos < buf.size() && buf[pos] != '\n') pos++;
        std::string line = buf.substr(start, pos - start);
        if (pos < buf.size()) pos++;
        else if (strict) fail("expected end of line");
        return line;
    }
    void quitf(TResult r, const char *fmt, ...) {
        va_list ap;
        va_start(ap, fmt);
        char b[4096];
        vsnprintf(b, sizeof b, fmt, ap);
        va_end(ap);
        quit(r, b);
    }
};

inline InStream inf, ouf, ans;

inline void registerValidation() { inf.init(std::cin, true, _fail, "validator"); }
inline void registerValidation(int, char *[]) { registerValidation(); }

inline void registerTestlibCmd(int argc, char *argv[]) {
    if (argc < 4) quit(_fail, "usage: checker <input> <output> <answer>");
    inf.init(argv[1], false, _fail, "input");
    ouf.init(argv[2], false, _pe, "output");
    ans.init(argv[3], false, _fail, "answer");
}

#endif
