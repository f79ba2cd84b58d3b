# assumes the values arrive sorted
import sys

data = sys.stdin.read().split()
n = int(data[0])
print(int(data[n]))
