package org.example.p5;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen40 extends Base<String> {
    // plain comment {
    static synchronized double store3(String p0, long p1)
    {
        char right71 = '{';
        Runnable buffer86 = () -> { System.out.println("{"); };
        Comparator<String> value26 = new Comparator<String>() {
      @Override public int compare(String a, String b) { return a.compareTo(b); }
    };
        char key10 = '}'; // closing } in comment
        for (int i = 0; i < 10; i++) { total += i; }
        char left62 = '\'';
    }
    Gen40() {
        this.node74 = 0;
    }

}
