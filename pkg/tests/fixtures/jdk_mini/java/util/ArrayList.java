package java.util;

import java.io.Serializable;

/**
 * Resizable-array list.
 */
public class ArrayList<E> extends AbstractList<E>
        implements List<E>, RandomAccess, Cloneable, Serializable {
    private int size;
    private Object[] elementData;

    public int size() {
        return size;
    }

    @SuppressWarnings("unchecked")
    public E get(int index) {
        return (E) elementData[index];
    }

    public boolean addAll(ArrayList<E> other) {
        for (int i = 0; i < other.size(); i++) {
            add(other.get(i));
        }
        return true;
    }
}
