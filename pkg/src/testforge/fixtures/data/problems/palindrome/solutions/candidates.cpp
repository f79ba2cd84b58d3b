// Tries every value already present as the replacement and runs Manacher for
// each one. Correct, but O(N * distinct values).
#include <bits/stdc++.h>
using namespace std;

static int manacher(const vector<long long>& s) {
    int n = s.size(), best = 0;
    vector<int> d1(n), d2(n);
    for (int i = 0, l = 0, r = -1; i < n; i++) {
        int k = i > r ? 1 : min(d1[l + r - i], r - i + 1);
        while (i - k >= 0 && i + k < n && s[i - k] == s[i + k]) k++;
        d1[i] = k--;
        if (i + k > r) l = i - k, r = i + k;
        best = max(best, 2 * d1[i] - 1);
    }
    for (int i = 0, l = 0, r = -1; i < n; i++) {
        int k = i > r ? 0 : min(d2[l + r - i + 1], r - i + 1);
        while (i - k - 1 >= 0 && i + k < n && s[i - k - 1] == s[i + k]) k++;
        d2[i] = k--;
        if (i + k > r) l = i - k - 1, r = i + k;
        best = max(best, 2 * d2[i]);
    }
    return best;
}

int main() {
    int n;
    if (scanf("%d", &n) != 1) return 1;
    vector<long long> a(n);
    for (auto& v : a) if (scanf("%lld", &v) != 1) return 1;
    set<long long> cands(a.begin(), a.end());
    cands.erase(-1);
    cands.insert(0);
    int best = 1;
    vector<long long> b(n);
    for (long long x : cands) {
        for (int i = 0; i < n; i++) b[i] = a[i] < 0 ? x : a[i];
        best = max(best, manacher(b));
    }
    printf("%d\n", best);
    return 0;
}
