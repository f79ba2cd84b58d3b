// usage: gen <n> <mode> <max_value> <erase_percent> <tag>
//   mode: random   values uniform in [1, max_value]
//         allneg   every value erased
//         const    every value equal to max_value, then erasures
//         palin    random palindrome, then erasures
//         distinct pairwise distinct values where possible, then erasures
#include "testlib.h"
#include <iostream>
#include <string>
#include <vector>
using namespace std;

int main(int argc, char* argv[]) {
    registerGen(argc, argv, 1);
    int n = atoi(argv[1]);
    string mode = argv[2];
    long long maxv = atoll(argv[3]);
    int erase = atoi(argv[4]);

    vector<long long> a(n);
    if (mode == "const") {
        for (auto& v : a) v = maxv;
    } else if (mode == "palin") {
        for (int i = 0; i < (n + 1) / 2; i++) a[i] = a[n - 1 - i] = rnd.next(1LL, maxv);
    } else if (mode == "distinct") {
        for (int i = 0; i < n; i++) a[i] = maxv - i > 0 ? maxv - i : rnd.next(1LL, maxv);
        shuffle(a.begin(), a.end());
    } else {
        for (auto& v : a) v = rnd.next(1LL, maxv);
    }
    for (auto& v : a)
        if (mode == "allneg" || rnd.next(100) < erase) v = -1;

    cout << n << "\n";
    for (int i = 0; i < n; i++) cout << a[i] << (i + 1 < n ? " " : "\n");
    return 0;
}
