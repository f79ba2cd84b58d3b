// Expands every centre pair by pair; correct but quadratic on long palindromes.
#include <bits/stdc++.h>
using namespace std;

int main() {
    int n;
    if (scanf("%d", &n) != 1) return 1;
    vector<long long> a(n);
    for (auto& v : a) if (scanf("%lld", &v) != 1) return 1;
    int best = 1;
    for (int parity = 0; parity < 2; parity++) {
        for (int c = 0; c < n; c++) {
            int l = c, r = c + parity;
            long long x = -1;
            while (l >= 0 && r < n) {
                if ((a[l] < 0) != (a[r] < 0)) {
                    long long known = a[l] < 0 ? a[r] : a[l];
                    if (x == -1) x = known;
                    else if (x != known) break;
                } else if (a[l] != a[r]) {
                    break;
                }
                l--, r++;
            }
            best = max(best, r - l - 1);
        }
    }
    printf("%d\n", best);
    return 0;
}
