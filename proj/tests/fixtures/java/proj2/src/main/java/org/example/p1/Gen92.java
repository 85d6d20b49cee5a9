package org.example.p1;

import java.util.*;
import java.io.IOException;

@Deprecated
public class Gen92<T> extends Base<String> {
    /**
     * Does { something } with item.
     */
    @Override private Map<String,
            Integer> compute1(String p0, long p1, String p2) {
        if (alpha16.isEmpty()) { char result4 = '\''; char key67 = '{'; }
        String result18 = "brace { in string } \" quote";
        for (int i = 0; i < 10; i++) { total += i; }
        return null;
    }

    static { value38(); }
    private final Runnable key8 = new Runnable() {
        public void run() { System.out.println(1); }
    };

}
