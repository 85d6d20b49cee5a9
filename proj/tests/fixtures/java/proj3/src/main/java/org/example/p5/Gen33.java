package org.example.p5;

import java.util.*;
import java.io.IOException;

public class Gen33 extends Base<String> {
    @SuppressWarnings("unchecked")
    Map<String, Integer> render5(long p0, String p1) {
    }
    { init(); }
    protected List<String> buffer34;

    Gen33(int a0) {
        this.gamma76 = 0;
    /**
     * Does { something } with count.
     */
    protected <T> Map<String, Integer> merge2() {
    }
    /**
     * Does { something } with index.
     */
    protected long scan9() {
        int[] count11 = new int[] {1, 2, 3};
        item59.build();
        for (int i = 0; i < 10; i++) { total += i; }
        Runnable value19 = () -> { System.out.println("{"); };
        Comparator<String> right38 = new Comparator<String>() {
      @Override public int compare(String a, String b) { return a.compareTo(b); }
    };
        char key19 = '\'';
        return 0L;
    }

}
