// Replays the card log in order. Exits for a group with nobody inside are
// reader glitches and are ignored. An odd-boys stretch still open at the last
// entry ends at that entry. Entries sharing a timestamp are simultaneous.
#include <bits/stdc++.h>
using namespace std;

int main() {
    int c, n;
    if (scanf("%d %d", &c, &n) != 2) return 1;
    long long boys = 0, girls = 0, occupied = 0, best = 0, start = -1, prev = -1, t = 0, even_at = -1;
    for (int i = 0; i < n; i++) {
        char g[4], d[4];
        int h, m, s;
        if (scanf("%3s %3s %d %d %d", g, d, &h, &m, &s) != 5) return 1;
        t = h * 3600LL + m * 60 + s;
        if (prev >= 0 && boys + girls > 0) occupied += t - prev;
        prev = t;
        long long& cnt = g[0] == 'b' ? boys : girls;
        if (d[0] == 'i') cnt++;
        else if (cnt > 0) cnt--;
        else continue;
        if (g[0] == 'b') {
            // entries sharing a timestamp are simultaneous: a parity flip that is
            // undone within the same second does not split the stretch
            if (boys % 2 == 1) { if (even_at != t) start = t; }
            else { best = max(best, t - start); even_at = t; }
        }
    }
    if (boys % 2 == 1) best = max(best, t - start);
    if (c == 1) printf("%lld %lld\n", boys, girls);
    else if (c == 2) printf("%lld\n", occupied);
    else printf("%lld\n", best);
    return 0;
}
