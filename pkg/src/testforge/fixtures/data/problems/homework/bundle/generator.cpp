// usage: gen <n> <max_value> <tag>
// Prints n values from [1, max_value] in ascending order on one line.
#include "testlib.h"
#include <algorithm>
#include <iostream>
#include <vector>
using namespace std;

int main(int argc, char* argv[]) {
    registerGen(argc, argv, 1);
    int n = atoi(argv[1]);
    long long maxv = atoll(argv[2]);
    vector<long long> a(n);
    for (auto& v : a) v = rnd.next(1LL, maxv);
    sort(a.begin(), a.end());
    cout << n << "\n";
    for (int i = 0; i < n; i++) cout << a[i] << (i + 1 < n ? " " : "\n");
    return 0;
}
