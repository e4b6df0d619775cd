package java.lang;

public final class Integer {
    private int value;

    public Integer(int value) {
        this.value = value;
    }

    public int intValue() {
        return value;
    }

    public String toString() {
        return toString(this);
    }

    public static String toString(Integer i) {
        return "int";
    }

    public boolean equals(Integer other) {
        return other.intValue() == intValue();
    }
}
