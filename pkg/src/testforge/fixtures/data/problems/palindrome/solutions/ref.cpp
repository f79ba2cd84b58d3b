// Reference: for every centre, the first mirrored pair with exactly one erased
// value fixes x; binary search the radius with polynomial hashes that are
// linear in x.
#include <bits/stdc++.h>
using namespace std;
typedef unsigned long long u64;

static const u64 MOD = (1ULL << 61) - 1;
static inline u64 mulmod(u64 a, u64 b) {
    __uint128_t c = (__uint128_t)a * b;
    u64 r = (u64)(c & MOD) + (u64)(c >> 61);
    return r >= MOD ? r - MOD : r;
}
static inline u64 addmod(u64 a, u64 b) { u64 r = a + b; return r >= MOD ? r - MOD : r; }
static inline u64 submod(u64 a, u64 b) { return a >= b ? a - b : a + MOD - b; }

int n;
vector<long long> a;
vector<u64> pw, fk, fm, rk, rm;  // forward/reverse prefix hashes of known part and erased mask

static u64 seg(const vector<u64>& pre, int l, int r) {  // [l, r]
    return submod(pre[r + 1], mulmod(pre[l], pw[r - l + 1]));
}
// hash of a[l..r] with every -1 replaced by x, forward and mirrored
static bool pal(int l, int r, u64 x) {
    int rl = n - 1 - r, rr = n - 1 - l;
    u64 f = addmod(seg(fk, l, r), mulmod(x, seg(fm, l, r)));
    u64 b = addmod(seg(rk, rl, rr), mulmod(x, seg(rm, rl, rr)));
    return f == b;
}
static bool maskpal(int l, int r) {
    return seg(fm, l, r) == seg(rm, n - 1 - r, n - 1 - l);
}

int main() {
    if (scanf("%d", &n) != 1) return 1;
    a.resize(n);
    for (auto& v : a) if (scanf("%lld", &v) != 1) return 1;
    const u64 base = 911382323ULL;
    pw.assign(n + 1, 1);
    for (int i = 1; i <= n; i++) pw[i] = mulmod(pw[i - 1], base);
    fk.assign(n + 1, 0); fm.assign(n + 1, 0); rk.assign(n + 1, 0); rm.assign(n + 1, 0);
    for (int i = 0; i < n; i++) {
        long long v = a[i], w = a[n - 1 - i];
        fk[i + 1] = addmod(mulmod(fk[i], base), v < 0 ? 0 : (u64)v);
        fm[i + 1] = addmod(mulmod(fm[i], base), v < 0 ? 1 : 0);
        rk[i + 1] = addmod(mulmod(rk[i], base), w < 0 ? 0 : (u64)w);
        rm[i + 1] = addmod(mulmod(rm[i], base), w < 0 ? 1 : 0);
    }
    int best = 1;
    for (int parity = 0; parity < 2; parity++) {
        for (int c = 0; c < n; c++) {
            // odd: [c-k, c+k]; even: [c-k+1, c+k]
            int L0 = c, R0 = parity ? c + 1 : c;
            if (R0 >= n) continue;
            int maxk = min(L0, n - 1 - R0);  // extra pairs beyond the core
            auto core_ok = [&](int k, u64 x) { return pal(L0 - k, R0 + k, x); };
            // first extension where masks disagree
            int lo = -1, hi = maxk;  // largest k with mask palindrome
            if (!maskpal(L0, R0)) hi = -1;
            else {
                lo = 0;
                while (lo < hi) {
                    int mid = (lo + hi + 1) / 2;
                    if (maskpal(L0 - mid, R0 + mid)) lo = mid; else hi = mid - 1;
                }
            }
            u64 x = 0;
            int probe = lo + 1;  // offset of the first mask mismatch
            if (lo < 0) probe = 0;
            if (probe <= maxk) {
                long long p = a[L0 - probe], q = a[R0 + probe];
                x = (u64)(p < 0 ? q : p);
            }
            if (!core_ok(0, x)) continue;
            int l2 = 0, h2 = maxk;
            while (l2 < h2) {
                int mid = (l2 + h2 + 1) / 2;
                if (core_ok(mid, x)) l2 = mid; else h2 = mid - 1;
            }
            best = max(best, (R0 + l2) - (L0 - l2) + 1);
        }
    }
    printf("%d\n", best);
    return 0;
}
